#pragma once

#include <cstdint>
#include <vector>

#include "histforce/condition.hpp"

namespace histforce {

// The height-alpha constituents of a condition: the condition itself at its
// own height; below that, the parts of every component one level up,
// deduplicated structurally (components with equal supports are equal), in
// first-occurrence order.  invalid_input when alpha exceeds the height.
std::vector<condition_ptr> components(const condition_ptr& p, std::uint32_t alpha);

// The unique alpha-component that is a pure predecessor: follow the
// official-part spine down to height alpha.
condition_ptr pr_component(const condition_ptr& p, std::uint32_t alpha);

// Is the level set Z closed for p?  Atomics accept everything; an amalgam
// needs Z closed for its official part, and when its top level lies in Z the
// levels where the official v-elements or the official block's minimum
// entered through a part must lie in Z too.  Levels must be sorted, distinct
// and below ht(p).
bool is_p_closed(const condition_ptr& p, const std::vector<std::uint32_t>& levels);

// The least p-closed superset of the given levels.
std::vector<std::uint32_t> close(const condition_ptr& p, const std::vector<std::uint32_t>& levels);

// U[p,Z]: the generators whose every through-a-part level lies in Z.
// Requires Z p-closed.
std::vector<gen_index> u_set(const condition_ptr& p, const std::vector<std::uint32_t>& levels);

// One entry of the signature: the shape of the components one level above the
// l-th closed level, together with the history vectors (at the earlier closed
// levels) of the official v-elements and of the official block's minimum.
struct upsilon_entry {
    std::uint32_t zeta = 0;
    term_ptr tau;
    std::uint32_t n = 0;
    std::vector<history_value> g;               // length l
    std::vector<std::vector<history_value>> h;  // n vectors of length l

    bool operator==(const upsilon_entry& other) const {
        return zeta == other.zeta && n == other.n && tau && other.tau &&
               tau->equals(*other.tau) && g == other.g && h == other.h;
    }
};

struct upsilon_signature {
    std::vector<upsilon_entry> entries;
    bool operator==(const upsilon_signature&) const = default;
};

// The signature of a closed level set.  Each entry is computed from the pure
// component at its level and cross-checked against a sibling component and a
// second v-set; a mismatch would contradict well-definedness and raises
// internal_error.  Requires Z p-closed.
upsilon_signature upsilon(const condition_ptr& p, const std::vector<std::uint32_t>& levels);

// The order isomorphism U[p,Z0] -> U[p,Z1] for closed sets of equal size with
// equal signatures (invalid_input otherwise).  Verifies that the map
// transports histories level-for-level (the (x) property) and — whenever the
// positional level map Z0 -> Z1 fixes the common levels — that it fixes the
// common generators; violations raise internal_error, since they would
// falsify the order-type law.
order_map u_iso(const condition_ptr& p, const std::vector<std::uint32_t>& z0,
                const std::vector<std::uint32_t>& z1);

// The flip of a row along u_iso(p, z0, z1): reads f through the map on
// U[p,Z0], through its inverse on U[p,Z1] minus U[p,Z0], and 0 elsewhere.
// Requires f to be a row of p's table.
assignment flip(const condition_ptr& p, const std::vector<std::uint32_t>& z0,
                const std::vector<std::uint32_t>& z1, const assignment& f);

// Harness hook: the same surgery along an arbitrary order map between two
// subsets of the support.  Exists so the check battery can demonstrate that
// maps without the history-transport property break table membership.
assignment flip_with_map(const condition_ptr& p, const order_map& pi, const assignment& f);

} // namespace histforce
