#pragma once

// Independent brute-force oracles for the acceptance battery.  These recurse
// over term nodes and stored rows directly, sharing no evaluation code with
// the library's column machinery.

#include <cstdint>
#include <vector>

#include "histforce/table.hpp"
#include "histforce/term.hpp"

namespace histforce::testing {

inline bool eval_on_row(const valuation_table& tbl, std::size_t row, const term& t,
                        const std::vector<gen_index>& args) {
    switch (t.node_kind()) {
    case term::kind::const0:
        return false;
    case term::kind::const1:
        return true;
    case term::kind::var:
        return tbl.row_bit(row, *tbl.position(args[t.slot()]));
    case term::kind::negation:
        return !eval_on_row(tbl, row, *t.lhs(), args);
    case term::kind::conjunction:
        return eval_on_row(tbl, row, *t.lhs(), args) && eval_on_row(tbl, row, *t.rhs(), args);
    case term::kind::disjunction:
        return eval_on_row(tbl, row, *t.lhs(), args) || eval_on_row(tbl, row, *t.rhs(), args);
    }
    return false;
}

// power-set semantics: the element named by the instance is nonzero exactly
// when some stored row satisfies it
inline bool oracle_nonzero(const valuation_table& tbl, const term_instance& inst) {
    for (std::size_t r = 0; r < tbl.row_count(); ++r)
        if (eval_on_row(tbl, r, *inst.t, inst.args)) return true;
    return false;
}

inline bool oracle_le(const valuation_table& tbl, const term_instance& a, const term_instance& b) {
    for (std::size_t r = 0; r < tbl.row_count(); ++r)
        if (eval_on_row(tbl, r, *a.t, a.args) && !eval_on_row(tbl, r, *b.t, b.args)) return false;
    return true;
}

} // namespace histforce::testing
