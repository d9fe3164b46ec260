#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "histforce/condition.hpp"
#include "histforce/table.hpp"

namespace histforce {

// One executed check: named verdict plus a replayable counterexample payload
// (JSON null when the check passed).  The id ties the report to the condition
// it ran against (see condition_id in wire.hpp).
struct check_report {
    std::string name;
    std::string condition_id;
    bool pass = true;
    nlohmann::ordered_json counterexample;
    double ms = 0.0;
};

// Exhaustive-first policy: a check enumerates its whole space when the size
// fits max_exhaustive, otherwise it draws `samples` seeded samples and the
// seed is recorded in the counterexample of any failure.
struct check_budget {
    std::size_t max_exhaustive = std::size_t(1) << 18;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
};

// Re-runs the well-formedness clauses through the public constructors and
// compares the stored table against an independent recursive membership
// oracle (both directions when 2^|u| fits the budget, sampled beyond).
check_report check_clauses(const condition_ptr& p, const check_budget& budget = {});

// The history-table laws: fingerprints are consistent with the h table (and
// finite); distinct generators separate at some level with two non-theta,
// unequal values; every level subset is somebody's exact fingerprint; leq
// implies support/height/subalgebra containment (and symmetry at equal
// heights); the official spine interpolates pure extension height by height.
check_report check_history_invariants(const condition_ptr& p);

// Isomorphism laws: parts of one amalgam are pairwise isomorphic with
// heart-fixing, v-transporting maps and equal row sets; relabeling is an
// isomorphism and transports components and predecessors (transport law).
check_report check_iso_transport(const condition_ptr& p);

// The transformation contract, verified over every component c of p:
// transform(c, p) keeps support and height, is a pure extension of c and
// extension-equivalent to p, degenerates to c at equal heights, commutes
// with relabeling, and is monotone along the official spine.
check_report check_transform_contract(const condition_ptr& p);

// Component laws: every height-alpha component is below p with coherent
// non-theta history values at and above alpha, every generator lies in
// exactly one dominating component, components are pairwise isomorphic, and
// exactly one is a pure predecessor.
check_report check_components(const condition_ptr& p);

// Closedness laws: the empty and full level sets are closed; close() yields
// the least closed superset; closed sets restrict to components and are
// isomorphism-invariant; U[p,Z] matches the direct fingerprint filter and
// lives inside the pure component above max(Z).
check_report check_closed_sets(const condition_ptr& p);

// Signature well-definedness: every closed set yields a signature whose
// entries are independent of the component and v-set they are read from
// (violations surface as internal errors and fail the check), with the
// arity/length bookkeeping intact and invariance under relabeling.
check_report check_upsilon_welldefined(const condition_ptr& p);

// The order-type law: closed sets with equal signatures have order-isomorphic
// U-sets, the isomorphism transports histories level-for-level, and it fixes
// the overlap whenever the level map fixes the common levels.
check_report check_signature_order_iso(const condition_ptr& p);

// No generator is generated by its predecessors: for every j in u^p the
// row-partition oracle refutes membership of x_j in the subalgebra generated
// by {x_i : i in u^p, i < j}.
check_report check_generator_independence(const condition_ptr& p);

// The majority chain of an amalgam: element xi is the majority term of the
// three lifted part terms of triple xi, as a term instance over u^q.  The
// table's construction makes the chain non-strictly increasing; it is
// strictly increasing when every part term passes the heart-independence
// gate.  invalid_input on atomics.
std::vector<term_instance> build_maj_chain(const condition_ptr& q);

// Checks the chain laws above: non-strict monotonicity unconditionally, and
// exact strict length floor(width/3) under the gate.
check_report check_majority_chain(const condition_ptr& p);

// Flip closure: for admissible closed pairs (Z0, Z1) — equal size, equal
// signature, level map fixing the common levels — flipping any table row
// along u_iso lands back in the table.  Exhaustive when pairs x rows fit the
// budget, seeded-sampled beyond.
check_report check_flip_closure(const condition_ptr& p, const check_budget& budget = {});

// The chain-collapse consequence for one explicit instance: given tau and
// w0, w1 with covering closed sets z0, z1, validates the preconditions item
// by item — (pre) closed + covering, (i) equal size and signature, (ii)
// level map fixes common levels, (iii) the U-isomorphism maps w0 onto w1 —
// raising invalid_input naming the failed item, then asserts that
// tau(w0) < tau(w1) does NOT hold strictly.
check_report check_chain_collapse(const condition_ptr& p, const term_ptr& tau,
                                  const std::vector<gen_index>& w0,
                                  const std::vector<gen_index>& w1,
                                  const std::vector<std::uint32_t>& z0,
                                  const std::vector<std::uint32_t>& z1);

// Sweeps the instance check over every pool term, every argument set w0 of
// matching arity, and every admissible (Z0, Z1) pair, taking w1 as the image
// of w0.  Exhaustive within budget, seeded-sampled beyond.
check_report check_chain_collapse_sweep(const condition_ptr& p, const check_budget& budget = {});

// decode(encode(p)) rebuilds identical structure, derived fields and id.
check_report check_serialization_roundtrip(const condition_ptr& p);

// All of the above in a fixed order; a check that throws is reported as a
// failure carrying the error text, never a crash.
std::vector<check_report> run_suite(const condition_ptr& p, const check_budget& budget = {});

} // namespace histforce
