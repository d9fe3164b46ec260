#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <vector>

#include "histforce/errors.hpp"
#include "histforce/table.hpp"
#include "histforce/term.hpp"

using namespace histforce;

TEST_CASE("term structure and evaluation") {
    term_ptr x0 = term::var(0);
    term_ptr x1 = term::var(1);
    term_ptr conj = term::conjunction_of(x0, x1);
    term_ptr neg = term::negation_of(x0);

    CHECK(x0->arity() == 1);
    CHECK(conj->arity() == 2);
    CHECK(neg->arity() == 1);
    CHECK(term::const1()->arity() == 0);

    CHECK(neg->eval({false}));
    CHECK(!neg->eval({true}));
    CHECK(!conj->eval({true, false}));
    CHECK(conj->eval({true, true}));
    CHECK(term::disjunction_of(x0, x1)->eval({false, true}));
    CHECK(term::const1()->eval({}));
    CHECK(!term::const0()->eval({}));

    CHECK(x0->equals(*term::var(0)));
    CHECK(!x0->equals(*x1));
    CHECK(!conj->equals(*term::disjunction_of(x0, x1)));
    CHECK(!x0->to_string().empty());
    CHECK(conj->to_string() != neg->to_string());
}

TEST_CASE("sigma_maj is the two-of-three majority") {
    term_ptr m = sigma_maj();
    CHECK(m->arity() == 3);
    for (unsigned mask = 0; mask < 8; ++mask) {
        std::vector<bool> bits{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0};
        int votes = int(bits[0]) + int(bits[1]) + int(bits[2]);
        CHECK(m->eval(bits) == (votes >= 2));
    }
}

TEST_CASE("substitute rewrites variable slots") {
    term_ptr t = term::conjunction_of(term::var(0), term::var(1));
    term_ptr s = substitute(t, {term::negation_of(term::var(2)), term::var(0)});
    CHECK(s->arity() == 3);
    // s = ~x2 & x0
    CHECK(s->eval({true, false, false}));
    CHECK(!s->eval({true, false, true}));
    CHECK(!s->eval({false, false, false}));
    // too few replacements for the arity
    CHECK_THROWS_AS(substitute(t, {term::var(0)}), invalid_input);
}

TEST_CASE("full table, columns and the element order") {
    valuation_table tbl = valuation_table::full({3, 5});
    CHECK(tbl.row_count() == 4);
    CHECK((tbl.domain() == std::vector<gen_index>{3, 5}));

    term_instance bottom = make_instance(term::conjunction_of(term::var(0), term::var(1)), {3, 5});
    term_instance mid = make_instance(term::var(0), {3});
    term_instance top = make_instance(term::disjunction_of(term::var(0), term::var(1)), {3, 5});

    CHECK(tbl.column(bottom).count() == 1);
    CHECK(tbl.column(mid).count() == 2);
    CHECK(tbl.column(top).count() == 3);
    CHECK(tbl.column(bottom).subset_of(tbl.column(top)));
    CHECK(!tbl.column(top).subset_of(tbl.column(bottom)));

    CHECK(elem_nonzero(tbl, bottom));
    CHECK(!elem_nonzero(tbl, make_instance(term::const0(), {})));
    CHECK(elem_le(tbl, bottom, mid));
    CHECK(elem_lt(tbl, bottom, mid));
    CHECK(elem_le(tbl, mid, mid));
    CHECK(!elem_lt(tbl, mid, mid));
    CHECK(elem_le(tbl, mid, top));
    CHECK(!elem_le(tbl, top, mid));
}

TEST_CASE("longest strict chain") {
    valuation_table tbl = valuation_table::full({0, 1});
    term_instance bottom = make_instance(term::conjunction_of(term::var(0), term::var(1)), {0, 1});
    term_instance mid = make_instance(term::var(0), {0});
    term_instance top = make_instance(term::disjunction_of(term::var(0), term::var(1)), {0, 1});

    chain_result up = longest_chain(tbl, {bottom, mid, top});
    CHECK(up.length == 3);
    CHECK((up.witness == std::vector<std::size_t>{0, 1, 2}));

    // chains are position-free: a reversed list carries the same chain
    chain_result down = longest_chain(tbl, {top, mid, bottom});
    CHECK(down.length == 3);
    CHECK((down.witness == std::vector<std::size_t>{2, 1, 0}));
    CHECK(longest_chain(tbl, {mid, mid, mid}).length == 1);
    CHECK(longest_chain(tbl, {}).length == 0);
}

TEST_CASE("generated-subalgebra membership and witnesses") {
    valuation_table full2 = valuation_table::full({0, 1});

    // on the full table x1 is independent of x0
    CHECK(!in_generated(full2, 1, {0}));
    auto w = generated_witness(full2, 1, {0});
    REQUIRE(w.has_value());
    // the witness names two rows agreeing on x0 and split by x1
    CHECK(full2.row_bit(w->first, *full2.position(0)) ==
          full2.row_bit(w->second, *full2.position(0)));
    CHECK(full2.row_bit(w->first, *full2.position(1)) !=
          full2.row_bit(w->second, *full2.position(1)));

    // after cutting to the rows 01 and 10, x1 = ~x0 is generated
    valuation_table anti({0, 1}, {0b01, 0b10});
    CHECK(in_generated(anti, 1, {0}));
    CHECK(!generated_witness(anti, 1, {0}).has_value());

    // constants are generated by the empty set; a variable is not
    CHECK(!instance_generated_witness(full2, make_instance(term::const1(), {}), {}).has_value());
    CHECK(instance_generated_witness(full2, make_instance(term::var(0), {0}), {}).has_value());
    CHECK(!instance_generated_witness(full2, make_instance(term::var(0), {0}), {0}).has_value());
}

TEST_CASE("full-algebra chain length") {
    CHECK(full_algebra_chain_length(valuation_table::full({0, 1})) == 5);
    CHECK(full_algebra_chain_length(valuation_table({7}, {0b0, 0b1})) == 3);
    CHECK_THROWS_AS(full_algebra_chain_length(valuation_table::full({0, 1, 2, 3})),
                    resource_limit);
}

TEST_CASE("restriction and subalgebra embedding") {
    valuation_table big = valuation_table::full({0, 1, 2});
    CHECK(big.restrict_to({0, 2}) == valuation_table::full({0, 2}));
    CHECK(is_subalgebra_embedding(valuation_table::full({0, 2}), big));

    valuation_table anti({0, 1}, {0b01, 0b10});
    CHECK(!is_subalgebra_embedding(anti, valuation_table::full({0, 1})));
    CHECK(is_subalgebra_embedding(anti, anti));
}

TEST_CASE("table and instance validation") {
    CHECK_THROWS_AS((valuation_table({1, 0}, {0})), invalid_input);    // unsorted domain
    CHECK_THROWS_AS((valuation_table({0, 1}, {})), invalid_input);     // no rows
    CHECK_THROWS_AS((valuation_table({0}, {0, 0})), invalid_input);    // duplicate rows
    CHECK_THROWS_AS((valuation_table({0}, {4})), invalid_input);       // bit outside domain
    CHECK_THROWS_AS(make_instance(term::var(0), {1, 2}), invalid_input); // args vs arity
    CHECK_THROWS_AS(make_instance(nullptr, {}), invalid_input);
    CHECK_THROWS_AS(make_instance(term::var(1), {3, 3}), invalid_input); // repeated arg

    // rows are stored sorted regardless of input order
    valuation_table t({0, 1}, {0b10, 0b01});
    CHECK(t.row_assignment(0).bits == 0b01);
    CHECK(t.row_assignment(1).bits == 0b10);
    CHECK(t.has_row(0b10));
    CHECK(!t.has_row(0b11));
}
