#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "histforce/condition.hpp"

namespace histforce {

// An ordered Delta-system inside a family of sorted index sets: a common
// heart, the chosen members (by family position, in block order), and their
// blocks, with the heart below all blocks and the blocks strictly increasing.
struct delta_system {
    std::vector<gen_index> heart;
    std::vector<std::size_t> members;
    std::vector<std::vector<gen_index>> blocks;
};

// A size-k sub-family forming an ordered Delta-system, or nullopt.  The
// search is exhaustive (lexicographic over k-subsets) for families of at most
// 20 sets and greedy beyond: every candidate heart arises as a pairwise
// intersection, and for a fixed heart the earliest-deadline scan over blocks
// maximizes the chain, so the two paths agree on solvability.
std::optional<delta_system> find_delta_system(const std::vector<std::vector<gen_index>>& family,
                                              std::size_t k);

// Chooses the v-set (for the term below) from the first selected condition;
// the other parts receive its transport along the part isomorphisms.
using v_selector = std::function<std::vector<gen_index>(const condition&)>;

// The cleaning step of the chain-condition argument: pick width-many pairwise
// isomorphic conditions whose supports form an ordered Delta-system and
// amalgamate them (official part 0).  search_failure when no isomorphism
// class contains such a sub-family; clause violations propagate from the
// amalgamation.
condition_ptr clean_and_amalgamate(const std::vector<condition_ptr>& conds, term_ptr tau_star,
                                   const v_selector& select_v);

} // namespace histforce
