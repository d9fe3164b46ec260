from ._core import (
    Condition,
    Error,
    FormatError,
    InternalError,
    InvalidInput,
    ResourceLimit,
    SearchFailure,
    Term,
    close,
    components,
    decode,
    generate,
    is_closed,
    leq,
    leq_pr,
    maj_chain_length,
    pr_component,
    run_suite,
    sigma_maj,
    transform,
    u_set,
)

__all__ = [
    "Condition",
    "Error",
    "FormatError",
    "InternalError",
    "InvalidInput",
    "ResourceLimit",
    "SearchFailure",
    "Term",
    "close",
    "components",
    "decode",
    "generate",
    "is_closed",
    "leq",
    "leq_pr",
    "maj_chain_length",
    "pr_component",
    "run_suite",
    "sigma_maj",
    "transform",
    "u_set",
]
