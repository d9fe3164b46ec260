#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "histforce/table.hpp"
#include "histforce/term.hpp"

namespace histforce {

// Height cap: amalgam table sizes grow as filtered width-fold products per
// level, so tall towers are out of reach anyway; fail early and loudly.
inline constexpr std::uint32_t kMaxHeight = 4;

// How a generator entered the support at one level: through part xi
// (index), through the heart (theta token), or through the official part
// zeta* (theta-plus-one token).
struct history_value {
    enum class kind : std::uint8_t { index, theta, theta_plus_one };

    kind k = kind::theta;
    std::uint32_t idx = 0; // meaningful only when k == kind::index

    static history_value make_index(std::uint32_t xi) { return {kind::index, xi}; }
    static history_value theta() { return {kind::theta, 0}; }
    static history_value theta_plus_one() { return {kind::theta_plus_one, 0}; }

    bool is_index() const { return k == kind::index; }
    // Report encoding relative to width t: Index(xi) -> xi, theta -> t, theta+1 -> t+1.
    std::uint32_t encoded(std::uint32_t width) const {
        switch (k) {
        case kind::index: return idx;
        case kind::theta: return width;
        case kind::theta_plus_one: return width + 1;
        }
        return width + 1;
    }
    bool operator==(const history_value&) const = default;
};

// Level tag: whether the generator sits in its level's chosen v-set, plus
// that level's term.
struct g_tag {
    bool bit = false;
    term_ptr t;

    bool operator==(const g_tag& other) const {
        return bit == other.bit && t && other.t && t->equals(*other.t);
    }
};

class condition;
using condition_ptr = std::shared_ptr<const condition>;

// An order isomorphism between two finite generator sets, by sorted position.
struct order_map {
    std::vector<gen_index> from; // strictly increasing
    std::vector<gen_index> to;   // strictly increasing, same size

    static order_map between(std::vector<gen_index> from, std::vector<gen_index> to);
    static order_map identity(std::vector<gen_index> support);

    gen_index map(gen_index j) const;     // invalid_input when j is not in `from`
    gen_index inverse(gen_index j) const; // invalid_input when j is not in `to`
    bool contains(gen_index j) const;
    bool operator==(const order_map&) const = default;
};

// A forcing condition: an atomic leaf over one generator, or a width-t
// amalgam of t pairwise order-isomorphic parts over an ordered Delta-system.
// All derived data (support u, table F, height, history table h, tag table g)
// is computed and validated at construction; instances are immutable.
class condition {
public:
    struct part {
        condition_ptr child;
        std::vector<gen_index> v; // sorted; |v| = arity of this level's term
    };

    // The height-0 condition over generator `index`: both assignments, empty
    // histories.
    static condition_ptr atomic(std::uint32_t width, gen_index index);

    // The successor-stage amalgam.  Validates the well-formedness clauses:
    //   (alpha) zeta_star < width, tau_star present (n_star := its arity)
    //   (beta)  parts share one height; v_xi sorted subset of part support,
    //           |v_xi| = n_star
    //   (gamma) part supports form an ordered Delta-system: common heart below
    //           all blocks, blocks nonempty and strictly increasing
    //   (delta) parts pairwise order-isomorphic over the identity on the
    //           heart, with F, v, h, g transported by the order isomorphism
    // Throws clause_violation naming the clause; resource_limit on the height
    // or table caps; internal_error if the (guaranteed nonempty) table comes
    // out empty.
    static condition_ptr amalgamate(std::uint32_t zeta_star, term_ptr tau_star,
                                    std::vector<gen_index> heart, std::vector<part> parts);

    std::uint32_t width() const { return width_; }
    std::uint32_t height() const { return height_; }
    bool is_atomic() const { return !tau_star_; }
    bool is_amalgam() const { return !is_atomic(); }

    gen_index atom_index() const;                 // atomic only
    std::uint32_t zeta_star() const;              // amalgam only, likewise below
    const term_ptr& tau_star() const;
    std::uint32_t n_star() const;
    const std::vector<gen_index>& heart() const;
    const std::vector<part>& parts() const;
    const condition_ptr& part_child(std::uint32_t xi) const;
    std::vector<gen_index> block(std::uint32_t xi) const; // part support minus heart

    const std::vector<gen_index>& support() const { return support_; }
    const valuation_table& table() const { return table_; }

    history_value history(gen_index j, std::uint32_t level) const;
    const g_tag& tag(gen_index j, std::uint32_t level) const;

    // Levels below height where j entered through a part: {beta : h(j,beta) is
    // an Index value}.
    std::vector<std::uint32_t> fingerprint(gen_index j) const;

    bool equals(const condition& other) const; // structural

private:
    condition(std::uint32_t width, gen_index index);
    condition(std::uint32_t width, std::uint32_t zeta_star, term_ptr tau_star,
              std::vector<gen_index> heart, std::vector<part> parts,
              std::vector<gen_index> support, valuation_table table, std::uint32_t height,
              std::vector<std::vector<history_value>> hist, std::vector<std::vector<g_tag>> tags);

    std::size_t position_of(gen_index j, const char* what) const;

    std::uint32_t width_;
    std::uint32_t height_;
    gen_index atom_index_ = 0;
    std::uint32_t zeta_star_ = 0;
    term_ptr tau_star_; // null iff atomic
    std::vector<gen_index> heart_;
    std::vector<part> parts_;
    std::vector<gen_index> support_;
    valuation_table table_;
    // hist_[pos][level] / tags_[pos][level] over support positions
    std::vector<std::vector<history_value>> hist_;
    std::vector<std::vector<g_tag>> tags_;

    friend condition_ptr make_corrupted_history(const condition_ptr& p);
};

// The extension preorder and the pure-extension order, restricted to finite
// stages: leq(p,q) iff p = q, or p is below some part of q, or p and q are
// parallel amalgams (equal term, heart and v-sets, supports equal partwise,
// parts pairwise below; the official index may differ).  leq_pr follows the
// zeta*-spine only.
bool leq(const condition& p, const condition& q);
bool leq_pr(const condition& p, const condition& q);

// The order isomorphism u^p -> u^q witnessing that p and q are isomorphic
// conditions (equal heights, equal support order types, h and g preserved at
// every level), or nullopt.  On success the table transport law
// F^p = {f o H : f in F^q} is asserted; its failure would be a library bug
// and raises internal_error.
std::optional<order_map> iso_map(const condition& p, const condition& q);

// Reindex a condition along an order map defined on (at least) its support.
// The result is isomorphic to the input via the restricted map.
condition_ptr relabel(const condition_ptr& p, const order_map& map);

// Transport p0 <= q0 across the isomorphism H = iso_map(q0, q1): the unique
// p1 <= q1 isomorphic to p0 via H restricted to u^{p0}.
condition_ptr transport(const order_map& H, const condition_ptr& p0, const condition& q0,
                        const condition& q1);

// The p-transformation of q: rewrite q's official-part choices so that p
// becomes a pure predecessor.  Requires leq(p, q).  The result keeps q's
// support, table and height, satisfies leq_pr(p, result), and is
// extension-equivalent to q.
condition_ptr transform(const condition_ptr& p, const condition_ptr& q);

// Negative-control hook for the check harness: a structurally identical copy
// of an amalgam whose history table has one entry corrupted.  Bypasses
// validation by design; never produced by the public constructors.
condition_ptr make_corrupted_history(const condition_ptr& p);

} // namespace histforce
