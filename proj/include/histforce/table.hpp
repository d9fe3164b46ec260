#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "histforce/term.hpp"

namespace histforce {

// Generator index: a natural number naming the free generator x_j.
using gen_index = std::uint32_t;

// Hard resource guards.  Rows are machine words over the sorted domain, so a
// table never holds more than 64 generators; the row cap keeps amalgam joins
// from exploding.
inline constexpr std::size_t kMaxDomain = 64;
inline constexpr std::size_t kMaxRows = std::size_t(1) << 20;

// One two-valued assignment on a sorted domain of generators.  Bit k of bits
// is the value at domain[k].
struct assignment {
    std::vector<gen_index> domain;
    std::uint64_t bits = 0;

    bool value_at(gen_index j) const; // invalid_input if j is not in the domain
    bool operator==(const assignment&) const = default;
};

// A term together with the sorted set of generators its slots bind to: slot k
// binds the k-th smallest argument.  |args| must equal the term's arity.
struct term_instance {
    term_ptr t;
    std::vector<gen_index> args;
};

term_instance make_instance(term_ptr t, std::vector<gen_index> args);

// A set of rows of a table, as a bitset over row positions.  The column of an
// algebra element is a row set; the Boolean order on elements is row-set
// inclusion.
class row_set {
public:
    row_set() = default;
    explicit row_set(std::size_t nrows) : nrows_(nrows), words_((nrows + 63) / 64, 0) {}

    std::size_t size() const { return nrows_; }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    std::size_t count() const;
    bool subset_of(const row_set& other) const;
    bool operator==(const row_set&) const = default;

private:
    std::size_t nrows_ = 0;
    std::vector<std::uint64_t> words_;
};

// The finitely presented Boolean algebra B_(w,F): a sorted generator domain w
// and a nonempty set of distinct assignments F on it.  Rows are stored sorted,
// so equal presentations compare equal componentwise.
class valuation_table {
public:
    valuation_table(std::vector<gen_index> domain, std::vector<std::uint64_t> rows);

    // The free table: all 2^|domain| assignments.
    static valuation_table full(std::vector<gen_index> domain);

    const std::vector<gen_index>& domain() const { return domain_; }
    const std::vector<std::uint64_t>& rows() const { return rows_; }
    std::size_t row_count() const { return rows_.size(); }

    std::optional<std::size_t> position(gen_index j) const; // index of j in the domain
    bool row_bit(std::size_t row, std::size_t pos) const { return (rows_[row] >> pos) & 1; }
    assignment row_assignment(std::size_t row) const { return {domain_, rows_[row]}; }
    bool has_row(std::uint64_t bits) const;

    // Restriction of every row to a subdomain (sorted subset of the domain),
    // deduplicated and sorted: the presentation of the subalgebra the
    // subdomain generates.
    valuation_table restrict_to(const std::vector<gen_index>& subdomain) const;

    // The value column of an instance: the set of rows where it evaluates to 1.
    row_set column(const term_instance& inst) const;

    bool operator==(const valuation_table&) const = default;

private:
    std::vector<gen_index> domain_;
    std::vector<std::uint64_t> rows_;
};

// cl(F).  Over a finite domain the closure condition is witnessed by u = w,
// so cl(F) = F; the call canonicalizes and returns the same presentation.
valuation_table closure(const valuation_table& table);

// Value of an instance under one assignment; invalid_input on unbound args.
bool instance_value(const assignment& f, const term_instance& inst);

// Element tests against a table: nonzero / order / strict order.  An element
// is its value column; a ≤ b iff no row values them (1,0); a < b additionally
// needs a row valuing them (0,1).
bool elem_nonzero(const valuation_table& table, const term_instance& inst);
bool elem_le(const valuation_table& table, const term_instance& a, const term_instance& b);
bool elem_lt(const valuation_table& table, const term_instance& a, const term_instance& b);

// Does x_j lie in the subalgebra generated by {x_i : i in v}?  For finite
// tables this is exactly: the j-column is constant on every class of the
// "equal restriction to v" partition of rows.  generated_witness returns a
// pair of row indices refuting membership, or nullopt when j IS generated.
bool in_generated(const valuation_table& table, gen_index j, const std::vector<gen_index>& v);
std::optional<std::pair<std::size_t, std::size_t>>
generated_witness(const valuation_table& table, gen_index j, const std::vector<gen_index>& v);

// Same partition test for an arbitrary element in place of x_j: nullopt when
// the instance's column lies in the subalgebra generated by {x_i : i in v}.
std::optional<std::pair<std::size_t, std::size_t>>
instance_generated_witness(const valuation_table& table, const term_instance& inst,
                           const std::vector<gen_index>& v);

// Longest strictly increasing chain among the given elements, as longest path
// in the strict-order DAG.  Returns the element count of the chain and the
// positions of a witness chain (deterministic: ties resolved by position).
struct chain_result {
    std::size_t length = 0;
    std::vector<std::size_t> witness;
};
chain_result longest_chain(const valuation_table& table, const std::vector<term_instance>& elements);

// Longest strict chain over ALL elements of the algebra.  Distinct rows are
// separated by generator columns, so the generated subalgebra is the full
// power set of rows and the answer is row_count()+1 elements; this computes it
// honestly by DP over all 2^rows columns.  resource_limit when rows > 12.
std::size_t full_algebra_chain_length(const valuation_table& table);

// Subalgebra test per presentations: every inner row extends to an outer row
// and every outer row restricts to an inner row.  invalid_input unless
// domain(inner) is a subset of domain(outer).
bool is_subalgebra_embedding(const valuation_table& inner, const valuation_table& outer);

} // namespace histforce
