#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "histforce/condition.hpp"
#include "histforce/errors.hpp"
#include "histforce/generate.hpp"
#include "histforce/signatures.hpp"
#include "histforce/term.hpp"

using namespace histforce;

namespace {

condition_ptr chain6() {
    std::vector<condition::part> parts;
    for (gen_index i = 0; i < 6; ++i)
        parts.push_back({condition::atomic(6, i), {i}});
    return condition::amalgamate(0, term::var(0), {}, parts);
}

condition_ptr trivial3() {
    std::vector<condition::part> parts;
    for (gen_index i = 0; i < 3; ++i)
        parts.push_back({condition::atomic(3, i), {}});
    return condition::amalgamate(0, term::const1(), {}, parts);
}

} // namespace

TEST_CASE("components and the pure spine") {
    condition_ptr q = chain6();

    auto level0 = components(q, 0);
    REQUIRE(level0.size() == 6);
    for (gen_index i = 0; i < 6; ++i) {
        CHECK(level0[i]->is_atomic());
        CHECK(leq(*level0[i], *q));
    }
    CHECK(pr_component(q, 0)->equals(*condition::atomic(6, 0)));

    auto level1 = components(q, 1);
    REQUIRE(level1.size() == 1);
    CHECK(level1[0]->equals(*q));
    CHECK(pr_component(q, 1)->equals(*q));

    CHECK_THROWS_AS(components(q, 2), invalid_input);
    CHECK(components(condition::atomic(6, 3), 0).size() == 1);
}

TEST_CASE("closed sets and the closure operator") {
    generator_spec spec;
    spec.seed = 11;
    spec.width = 2;
    spec.height = 2;
    condition_ptr p = generate(spec);
    REQUIRE(p->height() == 2);

    CHECK(is_p_closed(p, {}));
    CHECK((is_p_closed(p, {0, 1})));
    CHECK((close(p, {}) == std::vector<std::uint32_t>{}));

    auto z = close(p, {1});
    CHECK(is_p_closed(p, z));
    CHECK(std::binary_search(z.begin(), z.end(), 1u));
    CHECK((close(p, z) == z)); // idempotent

    // every closed set is its own closure, and closures are minimal
    for (std::uint32_t mask = 0; mask < 4; ++mask) {
        std::vector<std::uint32_t> levels;
        for (std::uint32_t l = 0; l < 2; ++l)
            if (mask & (1u << l)) levels.push_back(l);
        auto cl = close(p, levels);
        CHECK(is_p_closed(p, cl));
        CHECK(std::includes(cl.begin(), cl.end(), levels.begin(), levels.end()));
        if (is_p_closed(p, levels)) CHECK((cl == levels));
    }

    CHECK_THROWS_AS((is_p_closed(p, {1, 0})), invalid_input); // unsorted
    CHECK_THROWS_AS((is_p_closed(p, {5})), invalid_input);    // beyond the height
}

TEST_CASE("u_set follows the fingerprints") {
    condition_ptr q3 = trivial3();
    // only the official block's generator has an empty fingerprint
    CHECK((u_set(q3, {}) == std::vector<gen_index>{0}));
    CHECK((u_set(q3, {0}) == q3->support()));

    condition_ptr q = chain6();
    CHECK((u_set(q, {}) == std::vector<gen_index>{0}));
    CHECK((u_set(q, {0}) == q->support()));
}

TEST_CASE("upsilon of the width-6 chain at its only level") {
    condition_ptr q = chain6();

    upsilon_signature sig = upsilon(q, {0});
    REQUIRE(sig.entries.size() == 1);
    const upsilon_entry& e = sig.entries[0];
    CHECK(e.zeta == 0);
    CHECK(e.tau->equals(*term::var(0)));
    CHECK(e.n == 1);
    CHECK(e.g.empty()); // no earlier closed levels
    REQUIRE(e.h.size() == 1);
    CHECK(e.h[0].empty());

    CHECK(upsilon(q, {}).entries.empty());
    CHECK_THROWS_AS(upsilon(q, {7}), invalid_input);

    // a relabeled copy has the same signature
    order_map h = order_map::between(q->support(), {20, 21, 22, 23, 24, 25});
    CHECK(upsilon(relabel(q, h), {0}) == sig);
}

TEST_CASE("u_iso on the diagonal is the identity") {
    generator_spec spec;
    spec.seed = 5;
    spec.width = 3;
    spec.height = 2;
    condition_ptr p = generate(spec);

    for (std::uint32_t mask = 0; mask < 4; ++mask) {
        std::vector<std::uint32_t> z;
        for (std::uint32_t l = 0; l < 2; ++l)
            if (mask & (1u << l)) z.push_back(l);
        if (!is_p_closed(p, z)) continue;
        order_map pi = u_iso(p, z, z);
        CHECK((pi.from == u_set(p, z)));
        CHECK((pi.to == pi.from));
    }
}

TEST_CASE("u_iso rejects mismatched signatures") {
    condition_ptr q = chain6();
    // {} and {0} have different signatures (0 vs 1 entries)
    CHECK_THROWS_AS((u_iso(q, {}, {0})), invalid_input);
}

TEST_CASE("flips along equal-signature pairs stay inside the table") {
    condition_ptr q = chain6();
    const valuation_table& tbl = q->table();
    for (auto z : {std::vector<std::uint32_t>{}, std::vector<std::uint32_t>{0}}) {
        for (std::size_t r = 0; r < tbl.row_count(); ++r) {
            assignment g = flip(q, z, z, tbl.row_assignment(r));
            CHECK(tbl.has_row(g.bits));
        }
    }
}

TEST_CASE("a history-ignoring exchange map escapes the table") {
    condition_ptr q = chain6();
    // swap two generators of the first triple with two of the second; the map
    // is order-preserving but does not respect the majority filter
    order_map pi = order_map::between({0, 1}, {4, 5});
    const valuation_table& tbl = q->table();
    bool escaped = false;
    for (std::size_t r = 0; r < tbl.row_count() && !escaped; ++r)
        escaped = !tbl.has_row(flip_with_map(q, pi, tbl.row_assignment(r)).bits);
    CHECK(escaped);
}
