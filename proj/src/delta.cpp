#include "histforce/delta.hpp"

#include <algorithm>
#include <map>

#include "histforce/errors.hpp"

namespace histforce {

namespace {

std::vector<gen_index> intersect_sorted(const std::vector<gen_index>& a,
                                        const std::vector<gen_index>& b) {
    std::vector<gen_index> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<gen_index> subtract_sorted(const std::vector<gen_index>& a,
                                       const std::vector<gen_index>& b) {
    std::vector<gen_index> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool contains_sorted(const std::vector<gen_index>& a, const std::vector<gen_index>& sub) {
    return std::includes(a.begin(), a.end(), sub.begin(), sub.end());
}

// Validates one candidate selection against a fixed heart: every member
// contains the heart, every block is nonempty, and after sorting by block
// minimum the heart sits below the first block and consecutive blocks are
// strictly separated.  Pairwise intersections then equal the heart for free.
std::optional<delta_system> assemble(const std::vector<std::vector<gen_index>>& family,
                                     const std::vector<std::size_t>& picked,
                                     const std::vector<gen_index>& heart) {
    struct entry {
        std::size_t member;
        std::vector<gen_index> block;
    };
    std::vector<entry> entries;
    entries.reserve(picked.size());
    for (std::size_t m : picked) {
        if (!contains_sorted(family[m], heart)) return std::nullopt;
        std::vector<gen_index> block = subtract_sorted(family[m], heart);
        if (block.empty()) return std::nullopt;
        entries.push_back({m, std::move(block)});
    }
    std::sort(entries.begin(), entries.end(),
              [](const entry& a, const entry& b) { return a.block.front() < b.block.front(); });
    if (!heart.empty() && heart.back() >= entries.front().block.front()) return std::nullopt;
    for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
        if (entries[i].block.back() >= entries[i + 1].block.front()) return std::nullopt;
    }
    delta_system out;
    out.heart = heart;
    for (auto& e : entries) {
        out.members.push_back(e.member);
        out.blocks.push_back(std::move(e.block));
    }
    return out;
}

std::optional<delta_system> find_exhaustive(const std::vector<std::vector<gen_index>>& family,
                                            std::size_t k) {
    const std::size_t n = family.size();
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        std::vector<gen_index> heart = intersect_sorted(family[idx[0]], family[idx[1]]);
        if (auto ds = assemble(family, idx, heart)) return ds;
        // next k-subset in lexicographic order
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) return std::nullopt;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::optional<delta_system> find_greedy(const std::vector<std::vector<gen_index>>& family,
                                        std::size_t k) {
    // Any heart of a k-member system is the intersection of its first two
    // members, so trying every pairwise intersection is complete.
    std::vector<std::vector<gen_index>> hearts;
    for (std::size_t a = 0; a < family.size(); ++a) {
        for (std::size_t b = a + 1; b < family.size(); ++b) {
            hearts.push_back(intersect_sorted(family[a], family[b]));
        }
    }
    std::sort(hearts.begin(), hearts.end());
    hearts.erase(std::unique(hearts.begin(), hearts.end()), hearts.end());

    for (const auto& heart : hearts) {
        struct entry {
            gen_index lo, hi;
            std::size_t member;
        };
        std::vector<entry> compatible;
        for (std::size_t m = 0; m < family.size(); ++m) {
            if (!contains_sorted(family[m], heart)) continue;
            std::vector<gen_index> block = subtract_sorted(family[m], heart);
            if (block.empty()) continue;
            if (!heart.empty() && heart.back() >= block.front()) continue;
            compatible.push_back({block.front(), block.back(), m});
        }
        // earliest-deadline-first scan packs the longest strictly separated chain
        std::sort(compatible.begin(), compatible.end(), [](const entry& a, const entry& b) {
            return a.hi != b.hi ? a.hi < b.hi : (a.lo != b.lo ? a.lo < b.lo : a.member < b.member);
        });
        std::vector<std::size_t> picked;
        bool any = false;
        gen_index last_hi = 0;
        for (const auto& e : compatible) {
            if (any && e.lo <= last_hi) continue;
            picked.push_back(e.member);
            last_hi = e.hi;
            any = true;
            if (picked.size() == k) break;
        }
        if (picked.size() == k) {
            auto ds = assemble(family, picked, heart);
            if (ds) return ds;
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<delta_system> find_delta_system(const std::vector<std::vector<gen_index>>& family,
                                              std::size_t k) {
    if (k < 2) throw invalid_input("a Delta-system needs at least two members");
    for (const auto& set : family) {
        if (!std::is_sorted(set.begin(), set.end()) ||
            std::adjacent_find(set.begin(), set.end()) != set.end()) {
            throw invalid_input("family members must be sorted and duplicate-free");
        }
    }
    if (family.size() < k) return std::nullopt;
    if (family.size() <= 20) return find_exhaustive(family, k);
    return find_greedy(family, k);
}

condition_ptr clean_and_amalgamate(const std::vector<condition_ptr>& conds, term_ptr tau_star,
                                   const v_selector& select_v) {
    if (conds.empty()) throw invalid_input("clean_and_amalgamate: empty input");
    for (const auto& c : conds) {
        if (!c) throw invalid_input("clean_and_amalgamate: null condition");
    }
    if (!tau_star) throw invalid_input("clean_and_amalgamate: null term");
    if (!select_v) throw invalid_input("clean_and_amalgamate: null v selector");
    const std::uint32_t t = conds[0]->width();
    for (const auto& c : conds) {
        if (c->width() != t) throw invalid_input("clean_and_amalgamate: mixed widths");
    }
    if (conds.size() < t) {
        throw search_failure("clean_and_amalgamate: fewer conditions than the width");
    }

    // isomorphism classes, first-occurrence order
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < conds.size(); ++i) {
        bool placed = false;
        for (auto& cls : classes) {
            if (iso_map(*conds[cls[0]], *conds[i]).has_value()) {
                cls.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) classes.push_back({i});
    }

    for (const auto& cls : classes) {
        if (cls.size() < t) continue;
        std::vector<std::vector<gen_index>> family;
        family.reserve(cls.size());
        for (std::size_t i : cls) family.push_back(conds[i]->support());
        auto ds = find_delta_system(family, t);
        if (!ds) continue;

        std::vector<condition_ptr> selected;
        selected.reserve(t);
        for (std::size_t m : ds->members) selected.push_back(conds[cls[m]]);

        std::vector<gen_index> v0 = select_v(*selected[0]);
        std::vector<condition::part> parts;
        parts.reserve(t);
        for (const auto& c : selected) {
            auto h = iso_map(*selected[0], *c);
            if (!h) throw internal_error("clean_and_amalgamate: class member lost its isomorphism");
            std::vector<gen_index> v;
            v.reserve(v0.size());
            for (gen_index j : v0) v.push_back(h->map(j));
            parts.push_back({c, std::move(v)});
        }
        return condition::amalgamate(0, tau_star, ds->heart, parts);
    }
    throw search_failure(
        "clean_and_amalgamate: no isomorphism class holds width-many members forming an ordered "
        "Delta-system");
}

} // namespace histforce
