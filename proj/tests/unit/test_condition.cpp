#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "histforce/condition.hpp"
#include "histforce/errors.hpp"
#include "histforce/term.hpp"

using namespace histforce;

namespace {

// Width-6 amalgam of six atoms with tau* = x, v_xi = {xi}: the majority
// filter removes exactly the rows whose first-triple majority exceeds the
// second's, leaving 48 of the 64 assignments.
condition_ptr chain6() {
    std::vector<condition::part> parts;
    for (gen_index i = 0; i < 6; ++i)
        parts.push_back({condition::atomic(6, i), {i}});
    return condition::amalgamate(0, term::var(0), {}, parts);
}

// Width-3 amalgam with the constant term: nothing to filter.
condition_ptr trivial3() {
    std::vector<condition::part> parts;
    for (gen_index i = 0; i < 3; ++i)
        parts.push_back({condition::atomic(3, i), {}});
    return condition::amalgamate(0, term::const1(), {}, parts);
}

} // namespace

TEST_CASE("atomic conditions") {
    condition_ptr a = condition::atomic(3, 7);
    CHECK(a->width() == 3);
    CHECK(a->height() == 0);
    CHECK(a->is_atomic());
    CHECK(!a->is_amalgam());
    CHECK(a->atom_index() == 7);
    CHECK((a->support() == std::vector<gen_index>{7}));
    CHECK(a->table().row_count() == 2); // both assignments of the one generator
    CHECK(a->fingerprint(7).empty());
    CHECK(a->equals(*condition::atomic(3, 7)));
    CHECK(!a->equals(*condition::atomic(3, 8)));
    CHECK_THROWS_AS(condition::atomic(1, 0), invalid_input);
    CHECK_THROWS_AS(a->zeta_star(), invalid_input);
    CHECK_THROWS_AS(a->history(7, 0), invalid_input); // no levels below height 0
}

TEST_CASE("trivial width-3 amalgam") {
    condition_ptr q = trivial3();
    CHECK(q->height() == 1);
    CHECK(q->is_amalgam());
    CHECK((q->support() == std::vector<gen_index>{0, 1, 2}));
    CHECK(q->table().row_count() == 8); // constant term never filters
    CHECK(q->zeta_star() == 0);
    CHECK(q->n_star() == 0);
    CHECK(q->heart().empty());
    CHECK((q->block(1) == std::vector<gen_index>{1}));

    // top-level history: theta-plus-one on the official block, index elsewhere
    CHECK(q->history(0, 0) == history_value::theta_plus_one());
    CHECK(q->history(1, 0) == history_value::make_index(1));
    CHECK(q->history(2, 0) == history_value::make_index(2));
    CHECK(q->history(0, 0).encoded(3) == 4);
    CHECK(q->history(1, 0).encoded(3) == 1);

    const g_tag& t = q->tag(1, 0);
    CHECK(!t.bit); // v is empty, nobody is named by the term
    CHECK(t.t->equals(*term::const1()));

    CHECK(q->fingerprint(0).empty());
    CHECK((q->fingerprint(1) == std::vector<std::uint32_t>{0}));
    CHECK((q->fingerprint(2) == std::vector<std::uint32_t>{0}));
}

TEST_CASE("width-6 chain condition table") {
    condition_ptr q = chain6();
    CHECK(q->height() == 1);
    CHECK(q->support().size() == 6);
    CHECK(q->table().row_count() == 48); // 64 minus 16 majority violations
    CHECK(q->n_star() == 1);
    CHECK((q->parts()[4].v == std::vector<gen_index>{4}));
    CHECK(q->part_child(3)->equals(*condition::atomic(6, 3)));

    CHECK(q->history(0, 0) == history_value::theta_plus_one());
    for (gen_index j = 1; j < 6; ++j)
        CHECK(q->history(j, 0) == history_value::make_index(j));
    CHECK(q->tag(2, 0).bit); // every generator is named by its part's v
    CHECK(q->tag(2, 0).t->equals(*term::var(0)));

    // the missing rows are exactly those with first-triple majority above the
    // second's
    const valuation_table& tbl = q->table();
    for (std::uint64_t bits = 0; bits < 64; ++bits) {
        int m0 = (int(bits & 1) + int((bits >> 1) & 1) + int((bits >> 2) & 1)) >= 2;
        int m1 = (int((bits >> 3) & 1) + int((bits >> 4) & 1) + int((bits >> 5) & 1)) >= 2;
        CHECK(tbl.has_row(bits) == (m0 <= m1));
    }
}

TEST_CASE("extension orders") {
    condition_ptr q = chain6();
    condition_ptr a0 = condition::atomic(6, 0);
    condition_ptr a3 = condition::atomic(6, 3);

    CHECK(leq(*a0, *q));
    CHECK(leq(*a3, *q));
    CHECK(leq(*q, *q));
    CHECK(!leq(*q, *a0));
    CHECK(!leq(*condition::atomic(6, 40), *q));

    CHECK(leq_pr(*a0, *q)); // the official part is part 0
    CHECK(!leq_pr(*a3, *q));
    CHECK(leq_pr(*q, *q));
}

TEST_CASE("isomorphism, relabeling and transport") {
    condition_ptr q = chain6();
    std::vector<gen_index> to{10, 11, 12, 13, 14, 15};
    order_map h = order_map::between(q->support(), to);

    condition_ptr q2 = relabel(q, h);
    CHECK((q2->support() == to));
    CHECK(q2->table().row_count() == 48);

    auto found = iso_map(*q, *q2);
    REQUIRE(found.has_value());
    CHECK(*found == h);
    CHECK(!iso_map(*q, *condition::atomic(6, 0)).has_value());

    condition_ptr back = relabel(q2, order_map::between(to, q->support()));
    CHECK(back->equals(*q));

    condition_ptr moved = transport(h, condition::atomic(6, 0), *q, *q2);
    CHECK(moved->equals(*condition::atomic(6, 10)));
}

TEST_CASE("transform rewrites the official history") {
    condition_ptr q = chain6();
    condition_ptr a3 = condition::atomic(6, 3);

    condition_ptr r = transform(a3, q);
    CHECK((r->support() == q->support()));
    CHECK(r->height() == q->height());
    CHECK(r->table() == q->table());
    CHECK(r->zeta_star() == 3); // the spine now passes through a3's component
    CHECK(leq_pr(*a3, *r));
    CHECK(leq(*r, *q));
    CHECK(leq(*q, *r));

    CHECK(transform(q, q)->equals(*q));
    CHECK_THROWS_AS(transform(condition::atomic(6, 40), q), invalid_input);
}

TEST_CASE("construction clauses reject malformed amalgams") {
    condition_ptr a0 = condition::atomic(2, 0);
    condition_ptr a2 = condition::atomic(2, 2);
    condition_ptr a4 = condition::atomic(2, 4);
    condition_ptr a6 = condition::atomic(2, 6);
    term_ptr x0 = term::var(0);

    auto clause_of = [](auto&& fn) -> std::string {
        try {
            fn();
        } catch (const clause_violation& e) {
            return e.clause();
        }
        return "no violation";
    };

    // (alpha) official index out of range
    CHECK(clause_of([&] {
        condition::amalgamate(2, x0, {}, {{a0, {0}}, {a2, {2}}});
    }) == "alpha");

    // (beta) v size differs from the term arity
    CHECK(clause_of([&] {
        condition::amalgamate(0, x0, {}, {{a0, {}}, {a2, {2}}});
    }) == "beta");

    // (beta) parts of mixed heights
    condition_ptr tall = condition::amalgamate(0, x0, {}, {{a0, {0}}, {a2, {2}}});
    CHECK(clause_of([&] {
        condition::amalgamate(0, x0, {}, {{tall, {0}}, {a4, {4}}});
    }) == "beta");

    // (gamma) blocks out of order
    CHECK(clause_of([&] {
        condition::amalgamate(0, x0, {}, {{a2, {2}}, {a0, {0}}});
    }) == "gamma");

    // (gamma) overlapping supports without a declared heart
    CHECK(clause_of([&] {
        condition::amalgamate(0, x0, {}, {{a0, {0}}, {a0, {0}}});
    }) == "gamma");

    // (delta) parts disagree on transported structure
    condition_ptr t1 = condition::amalgamate(0, x0, {}, {{a0, {0}}, {a2, {2}}});
    condition_ptr t2 =
        condition::amalgamate(0, term::negation_of(x0), {}, {{a4, {4}}, {a6, {6}}});
    CHECK(clause_of([&] {
        condition::amalgamate(0, x0, {}, {{t1, {0}}, {t2, {4}}});
    }) == "delta");

    // width below 2
    CHECK_THROWS_AS(condition::amalgamate(0, x0, {}, {}), invalid_input);
}
