#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace histforce {

class term;
using term_ptr = std::shared_ptr<const term>;

// A Boolean term over positional slots x_0, x_1, ....  Terms are immutable and
// shared; equality is structural.  The arity of a term is one past the largest
// slot it mentions (0 for slot-free terms), so evaluating a term consumes a bit
// vector of exactly that length even if some earlier slot is unused.
class term {
public:
    enum class kind : std::uint8_t { const0, const1, var, negation, conjunction, disjunction };

    static term_ptr const0();
    static term_ptr const1();
    static term_ptr var(std::uint32_t slot);
    static term_ptr negation_of(term_ptr inner);
    static term_ptr conjunction_of(term_ptr lhs, term_ptr rhs);
    static term_ptr disjunction_of(term_ptr lhs, term_ptr rhs);

    kind node_kind() const { return kind_; }
    std::uint32_t slot() const { return slot_; }        // var nodes only
    const term_ptr& lhs() const { return lhs_; }        // negation uses lhs
    const term_ptr& rhs() const { return rhs_; }
    std::uint32_t arity() const { return arity_; }

    // Evaluate with slot k bound to bits[k].  Requires bits.size() == arity().
    bool eval(const std::vector<bool>& bits) const;

    // Evaluate with slot k bound to bit k of the mask; no length check, the
    // caller guarantees the mask covers every slot.  Hot path for table scans.
    bool eval_mask(std::uint64_t bits) const;

    bool equals(const term& other) const;
    std::string to_string() const;

private:
    term(kind k, std::uint32_t slot, term_ptr lhs, term_ptr rhs, std::uint32_t arity)
        : kind_(k), slot_(slot), lhs_(std::move(lhs)), rhs_(std::move(rhs)), arity_(arity) {}

    kind kind_;
    std::uint32_t slot_ = 0;
    term_ptr lhs_;
    term_ptr rhs_;
    std::uint32_t arity_ = 0;
};

// Substitute replacement[k] for slot k.  Requires replacements.size() >= t->arity().
term_ptr substitute(const term_ptr& t, const std::vector<term_ptr>& replacements);

// The three-slot majority term (y0 & y1) | (y0 & y2) | (y1 & y2).
term_ptr sigma_maj();

} // namespace histforce
