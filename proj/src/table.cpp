#include "histforce/table.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <unordered_map>

#include "histforce/errors.hpp"

namespace histforce {

namespace {

bool sorted_unique(const std::vector<gen_index>& xs) {
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i - 1] >= xs[i]) return false;
    return true;
}

// Positions of subdomain elements inside domain; invalid_input when not contained.
std::vector<std::size_t> positions_in(const std::vector<gen_index>& domain,
                                      const std::vector<gen_index>& subdomain,
                                      const char* what) {
    std::vector<std::size_t> pos;
    pos.reserve(subdomain.size());
    for (gen_index j : subdomain) {
        auto it = std::lower_bound(domain.begin(), domain.end(), j);
        if (it == domain.end() || *it != j)
            throw invalid_input(std::string(what) + ": generator " + std::to_string(j) +
                                " not in domain");
        pos.push_back(std::size_t(it - domain.begin()));
    }
    return pos;
}

std::uint64_t gather_bits(std::uint64_t row, const std::vector<std::size_t>& pos) {
    std::uint64_t out = 0;
    for (std::size_t k = 0; k < pos.size(); ++k)
        out |= ((row >> pos[k]) & 1) << k;
    return out;
}

} // namespace

bool assignment::value_at(gen_index j) const {
    auto it = std::lower_bound(domain.begin(), domain.end(), j);
    if (it == domain.end() || *it != j)
        throw invalid_input("assignment: generator " + std::to_string(j) + " unbound");
    return (bits >> (it - domain.begin())) & 1;
}

term_instance make_instance(term_ptr t, std::vector<gen_index> args) {
    if (!t) throw invalid_input("instance: null term");
    if (!sorted_unique(args)) throw invalid_input("instance: args must be sorted and distinct");
    if (args.size() != t->arity())
        throw invalid_input("instance: " + std::to_string(args.size()) + " args for arity " +
                            std::to_string(t->arity()));
    return {std::move(t), std::move(args)};
}

std::size_t row_set::count() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += std::size_t(std::popcount(w));
    return n;
}

bool row_set::subset_of(const row_set& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~other.words_[i]) return false;
    return true;
}

valuation_table::valuation_table(std::vector<gen_index> domain, std::vector<std::uint64_t> rows)
    : domain_(std::move(domain)), rows_(std::move(rows)) {
    if (!sorted_unique(domain_)) throw invalid_input("table: domain must be sorted and distinct");
    if (domain_.size() > kMaxDomain)
        throw resource_limit("table: domain exceeds " + std::to_string(kMaxDomain) + " generators");
    if (rows_.empty()) throw invalid_input("table: rows must be nonempty");
    if (rows_.size() > kMaxRows)
        throw resource_limit("table: " + std::to_string(rows_.size()) + " rows exceed the cap");
    std::sort(rows_.begin(), rows_.end());
    if (std::adjacent_find(rows_.begin(), rows_.end()) != rows_.end())
        throw invalid_input("table: rows must be pairwise distinct");
    if (domain_.size() < 64) {
        const std::uint64_t limit = std::uint64_t(1) << domain_.size();
        if (!rows_.empty() && rows_.back() >= limit)
            throw invalid_input("table: row has bits outside the domain");
    }
}

valuation_table valuation_table::full(std::vector<gen_index> domain) {
    if (domain.size() > 20)
        throw resource_limit("full table on " + std::to_string(domain.size()) + " generators");
    std::vector<std::uint64_t> rows(std::size_t(1) << domain.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return valuation_table(std::move(domain), std::move(rows));
}

std::optional<std::size_t> valuation_table::position(gen_index j) const {
    auto it = std::lower_bound(domain_.begin(), domain_.end(), j);
    if (it == domain_.end() || *it != j) return std::nullopt;
    return std::size_t(it - domain_.begin());
}

bool valuation_table::has_row(std::uint64_t bits) const {
    return std::binary_search(rows_.begin(), rows_.end(), bits);
}

valuation_table valuation_table::restrict_to(const std::vector<gen_index>& subdomain) const {
    const auto pos = positions_in(domain_, subdomain, "restrict_to");
    std::vector<std::uint64_t> out;
    out.reserve(rows_.size());
    for (std::uint64_t r : rows_) out.push_back(gather_bits(r, pos));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return valuation_table(subdomain, std::move(out));
}

row_set valuation_table::column(const term_instance& inst) const {
    const auto pos = positions_in(domain_, inst.args, "column");
    row_set col(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (inst.t->eval_mask(gather_bits(rows_[i], pos))) col.set(i);
    return col;
}

valuation_table closure(const valuation_table& table) { return table; }

bool instance_value(const assignment& f, const term_instance& inst) {
    const auto pos = positions_in(f.domain, inst.args, "instance_value");
    return inst.t->eval_mask(gather_bits(f.bits, pos));
}

bool elem_nonzero(const valuation_table& table, const term_instance& inst) {
    return table.column(inst).count() > 0;
}

bool elem_le(const valuation_table& table, const term_instance& a, const term_instance& b) {
    return table.column(a).subset_of(table.column(b));
}

bool elem_lt(const valuation_table& table, const term_instance& a, const term_instance& b) {
    const row_set ca = table.column(a), cb = table.column(b);
    return ca.subset_of(cb) && ca != cb;
}

std::optional<std::pair<std::size_t, std::size_t>>
generated_witness(const valuation_table& table, gen_index j, const std::vector<gen_index>& v) {
    if (!table.position(j))
        throw invalid_input("in_generated: generator " + std::to_string(j) + " not in domain");
    const std::size_t jpos = *table.position(j);
    const auto vpos = positions_in(table.domain(), v, "in_generated");
    // first row seen per v-restriction class; any class with both j-values refutes
    std::unordered_map<std::uint64_t, std::size_t> first;
    first.reserve(table.row_count());
    for (std::size_t i = 0; i < table.row_count(); ++i) {
        const std::uint64_t key = gather_bits(table.rows()[i], vpos);
        auto [it, inserted] = first.emplace(key, i);
        if (!inserted && table.row_bit(it->second, jpos) != table.row_bit(i, jpos))
            return std::make_pair(it->second, i);
    }
    return std::nullopt;
}

bool in_generated(const valuation_table& table, gen_index j, const std::vector<gen_index>& v) {
    return !generated_witness(table, j, v).has_value();
}

std::optional<std::pair<std::size_t, std::size_t>>
instance_generated_witness(const valuation_table& table, const term_instance& inst,
                           const std::vector<gen_index>& v) {
    const row_set col = table.column(inst);
    const auto vpos = positions_in(table.domain(), v, "instance_generated_witness");
    std::unordered_map<std::uint64_t, std::size_t> first;
    first.reserve(table.row_count());
    for (std::size_t i = 0; i < table.row_count(); ++i) {
        const std::uint64_t key = gather_bits(table.rows()[i], vpos);
        auto [it, inserted] = first.emplace(key, i);
        if (!inserted && col.test(it->second) != col.test(i))
            return std::make_pair(it->second, i);
    }
    return std::nullopt;
}

namespace {

// Longest path in the strict-inclusion DAG over columns.  Deterministic:
// nodes processed by (popcount, position), predecessor ties to the smallest
// position.
chain_result longest_chain_over(const std::vector<row_set>& cols) {
    const std::size_t m = cols.size();
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::vector<std::size_t> pop(m);
    for (std::size_t i = 0; i < m; ++i) pop[i] = cols[i].count();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pop[a] < pop[b]; });

    std::vector<std::size_t> best(m, 1);
    std::vector<std::ptrdiff_t> pred(m, -1);
    for (std::size_t oi = 0; oi < m; ++oi) {
        const std::size_t i = order[oi];
        for (std::size_t oj = 0; oj < oi; ++oj) {
            const std::size_t j = order[oj];
            if (pop[j] >= pop[i]) continue; // strict inclusion needs smaller count
            if (!cols[j].subset_of(cols[i])) continue;
            if (best[j] + 1 > best[i] || (best[j] + 1 == best[i] && pred[i] > std::ptrdiff_t(j))) {
                best[i] = best[j] + 1;
                pred[i] = std::ptrdiff_t(j);
            }
        }
    }
    chain_result result;
    if (m == 0) return result;
    std::size_t tail = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (best[i] > best[tail]) tail = i;
    result.length = best[tail];
    for (std::ptrdiff_t at = std::ptrdiff_t(tail); at >= 0; at = pred[std::size_t(at)])
        result.witness.push_back(std::size_t(at));
    std::reverse(result.witness.begin(), result.witness.end());
    return result;
}

} // namespace

chain_result longest_chain(const valuation_table& table,
                           const std::vector<term_instance>& elements) {
    std::vector<row_set> cols;
    cols.reserve(elements.size());
    for (const auto& e : elements) cols.push_back(table.column(e));
    return longest_chain_over(cols);
}

std::size_t full_algebra_chain_length(const valuation_table& table) {
    const std::size_t r = table.row_count();
    if (r > 12)
        throw resource_limit("full algebra over " + std::to_string(r) + " rows (max 12)");
    std::vector<row_set> cols;
    cols.reserve(std::size_t(1) << r);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << r); ++mask) {
        row_set col(r);
        for (std::size_t i = 0; i < r; ++i)
            if ((mask >> i) & 1) col.set(i);
        cols.push_back(std::move(col));
    }
    return longest_chain_over(cols).length;
}

bool is_subalgebra_embedding(const valuation_table& inner, const valuation_table& outer) {
    // throws unless inner's domain is contained in outer's
    const valuation_table restricted = outer.restrict_to(inner.domain());
    // equality of row sets = every inner row extends outward and every outer
    // row restricts inward (cl(inner rows) = inner rows over a finite domain)
    return restricted.rows() == inner.rows();
}

} // namespace histforce
