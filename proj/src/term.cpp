#include "histforce/term.hpp"

#include <algorithm>

#include "histforce/errors.hpp"

namespace histforce {

namespace {

constexpr std::uint32_t kMaxSlot = 63; // slots index bits of a machine word

} // namespace

term_ptr term::const0() {
    static const term_ptr instance(new term(kind::const0, 0, nullptr, nullptr, 0));
    return instance;
}

term_ptr term::const1() {
    static const term_ptr instance(new term(kind::const1, 0, nullptr, nullptr, 0));
    return instance;
}

term_ptr term::var(std::uint32_t slot) {
    if (slot > kMaxSlot) throw invalid_input("term slot out of range: " + std::to_string(slot));
    return term_ptr(new term(kind::var, slot, nullptr, nullptr, slot + 1));
}

term_ptr term::negation_of(term_ptr inner) {
    if (!inner) throw invalid_input("negation of null term");
    const std::uint32_t arity = inner->arity();
    return term_ptr(new term(kind::negation, 0, std::move(inner), nullptr, arity));
}

term_ptr term::conjunction_of(term_ptr lhs, term_ptr rhs) {
    if (!lhs || !rhs) throw invalid_input("conjunction of null term");
    const std::uint32_t arity = std::max(lhs->arity(), rhs->arity());
    return term_ptr(new term(kind::conjunction, 0, std::move(lhs), std::move(rhs), arity));
}

term_ptr term::disjunction_of(term_ptr lhs, term_ptr rhs) {
    if (!lhs || !rhs) throw invalid_input("disjunction of null term");
    const std::uint32_t arity = std::max(lhs->arity(), rhs->arity());
    return term_ptr(new term(kind::disjunction, 0, std::move(lhs), std::move(rhs), arity));
}

bool term::eval(const std::vector<bool>& bits) const {
    if (bits.size() != arity_)
        throw invalid_input("term eval: got " + std::to_string(bits.size()) +
                            " bits for arity " + std::to_string(arity_));
    std::uint64_t mask = 0;
    for (std::size_t k = 0; k < bits.size(); ++k)
        if (bits[k]) mask |= std::uint64_t(1) << k;
    return eval_mask(mask);
}

bool term::eval_mask(std::uint64_t bits) const {
    switch (kind_) {
    case kind::const0: return false;
    case kind::const1: return true;
    case kind::var: return (bits >> slot_) & 1;
    case kind::negation: return !lhs_->eval_mask(bits);
    case kind::conjunction: return lhs_->eval_mask(bits) && rhs_->eval_mask(bits);
    case kind::disjunction: return lhs_->eval_mask(bits) || rhs_->eval_mask(bits);
    }
    throw internal_error("term eval: unreachable node kind");
}

bool term::equals(const term& other) const {
    if (kind_ != other.kind_) return false;
    switch (kind_) {
    case kind::const0:
    case kind::const1: return true;
    case kind::var: return slot_ == other.slot_;
    case kind::negation: return lhs_->equals(*other.lhs_);
    case kind::conjunction:
    case kind::disjunction:
        return lhs_->equals(*other.lhs_) && rhs_->equals(*other.rhs_);
    }
    return false;
}

std::string term::to_string() const {
    switch (kind_) {
    case kind::const0: return "0";
    case kind::const1: return "1";
    case kind::var: return "x" + std::to_string(slot_);
    case kind::negation: return "~" + lhs_->to_string();
    case kind::conjunction: return "(" + lhs_->to_string() + " & " + rhs_->to_string() + ")";
    case kind::disjunction: return "(" + lhs_->to_string() + " | " + rhs_->to_string() + ")";
    }
    return "?";
}

term_ptr substitute(const term_ptr& t, const std::vector<term_ptr>& replacements) {
    if (!t) throw invalid_input("substitute: null term");
    switch (t->node_kind()) {
    case term::kind::const0:
    case term::kind::const1: return t;
    case term::kind::var:
        if (t->slot() >= replacements.size())
            throw invalid_input("substitute: no replacement for slot " + std::to_string(t->slot()));
        return replacements[t->slot()];
    case term::kind::negation:
        return term::negation_of(substitute(t->lhs(), replacements));
    case term::kind::conjunction:
        return term::conjunction_of(substitute(t->lhs(), replacements),
                                    substitute(t->rhs(), replacements));
    case term::kind::disjunction:
        return term::disjunction_of(substitute(t->lhs(), replacements),
                                    substitute(t->rhs(), replacements));
    }
    throw internal_error("substitute: unreachable node kind");
}

term_ptr sigma_maj() {
    static const term_ptr instance = [] {
        const term_ptr y0 = term::var(0), y1 = term::var(1), y2 = term::var(2);
        return term::disjunction_of(
            term::disjunction_of(term::conjunction_of(y0, y1), term::conjunction_of(y0, y2)),
            term::conjunction_of(y1, y2));
    }();
    return instance;
}

} // namespace histforce
