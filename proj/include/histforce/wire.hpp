#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "histforce/condition.hpp"

namespace histforce {

// Canonical JSON wire form.  Only the construction data travels:
//   {"width": W, "node": NODE}
//   NODE  = {"atomic": I}
//         | {"amalgam": {"zeta_star": Z, "tau_star": TERM,
//                        "heart": [..], "parts": [{"node": NODE, "v": [..]}..]}}
//   TERM  = ["const",0|1] | ["var",K] | ["not",T] | ["and",T,T] | ["or",T,T]
// Integer lists are strictly ascending; keys are emitted in the order shown.
// Derived fields (support, table, histories, tags) are never serialized: the
// decoder rebuilds through the validating constructors, so every load
// re-checks the well-formedness clauses.

nlohmann::ordered_json encode_term(const term& t);
term_ptr decode_term(const nlohmann::ordered_json& doc);

nlohmann::ordered_json encode(const condition& p);
std::string encode_string(const condition& p); // compact dump of encode(p)

// Malformed documents raise format_error; documents that parse but violate a
// construction clause propagate the constructor's error.
condition_ptr decode(const nlohmann::ordered_json& doc);
condition_ptr decode_string(std::string_view text);

// Stable identifier: FNV-1a (64-bit) of the canonical encoding, as 16 hex
// digits.  Equal conditions share ids; reports reference conditions by it.
std::string condition_id(const condition& p);

} // namespace histforce
