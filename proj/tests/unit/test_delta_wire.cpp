#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <string>
#include <vector>

#include "histforce/condition.hpp"
#include "histforce/delta.hpp"
#include "histforce/errors.hpp"
#include "histforce/generate.hpp"
#include "histforce/term.hpp"
#include "histforce/wire.hpp"

using namespace histforce;

TEST_CASE("ordered delta systems, exhaustive tier") {
    std::vector<std::vector<gen_index>> fam{{1, 2}, {1, 3}, {1, 4}};
    auto ds = find_delta_system(fam, 3);
    REQUIRE(ds.has_value());
    CHECK((ds->heart == std::vector<gen_index>{1}));
    CHECK((ds->members == std::vector<std::size_t>{0, 1, 2}));
    CHECK((ds->blocks == std::vector<std::vector<gen_index>>{{2}, {3}, {4}}));

    // pairwise intersections disagree: no delta system of size 3
    std::vector<std::vector<gen_index>> tangled{{1, 2}, {2, 3}, {1, 3}};
    CHECK(!find_delta_system(tangled, 3).has_value());
    CHECK(find_delta_system(tangled, 2).has_value());

    // heart must lie below every block
    std::vector<std::vector<gen_index>> inverted{{2, 9}, {1, 2}};
    CHECK(!find_delta_system(inverted, 2).has_value());

    CHECK_THROWS_AS(find_delta_system(fam, 1), invalid_input);
    std::vector<std::vector<gen_index>> unsorted{{2, 1}, {1, 3}};
    CHECK_THROWS_AS(find_delta_system(unsorted, 2), invalid_input);
}

TEST_CASE("ordered delta systems, greedy tier") {
    std::vector<std::vector<gen_index>> fam;
    for (gen_index i = 0; i < 25; ++i) fam.push_back({0, 10 + 2 * i});
    auto ds = find_delta_system(fam, 4);
    REQUIRE(ds.has_value());
    CHECK((ds->heart == std::vector<gen_index>{0}));
    CHECK(ds->members.size() == 4);
    for (std::size_t i = 1; i < 4; ++i)
        CHECK(ds->blocks[i - 1].back() < ds->blocks[i].front());
}

TEST_CASE("clean and amalgamate") {
    std::vector<condition_ptr> pool;
    for (gen_index i = 0; i < 5; ++i) pool.push_back(condition::atomic(2, 2 * i));
    auto pick_front = [](const condition& c) {
        return std::vector<gen_index>{c.support().front()};
    };

    condition_ptr q = clean_and_amalgamate(pool, term::var(0), pick_front);
    REQUIRE(q);
    CHECK(q->is_amalgam());
    CHECK(q->width() == 2);
    CHECK(q->height() == 1);
    CHECK(q->zeta_star() == 0);
    CHECK(q->support().size() == 2);

    // fewer conditions than the width
    CHECK_THROWS_AS(clean_and_amalgamate({condition::atomic(2, 0)}, term::var(0), pick_front),
                    search_failure);

    // no isomorphism class of size 2 with separated supports
    std::vector<condition_ptr> entangled{condition::atomic(2, 0), condition::atomic(2, 0)};
    CHECK_THROWS_AS(clean_and_amalgamate(entangled, term::var(0), pick_front), search_failure);
}

TEST_CASE("wire roundtrips") {
    for (std::uint64_t seed : {0ull, 3ull, 7ull, 12ull}) {
        generator_spec spec;
        spec.seed = seed;
        spec.width = 3;
        spec.height = 2;
        condition_ptr p = generate(spec);

        std::string s = encode_string(*p);
        condition_ptr q = decode_string(s);
        CHECK(q->equals(*p));
        CHECK(q->table() == p->table());
        CHECK(encode_string(*q) == s); // canonical form is stable
        CHECK(condition_id(*q) == condition_id(*p));
        CHECK(condition_id(*p).size() == 16);
        CHECK(condition_id(*p).find_first_not_of("0123456789abcdef") == std::string::npos);
    }
    CHECK(condition_id(*condition::atomic(2, 0)) != condition_id(*condition::atomic(2, 1)));
}

TEST_CASE("wire rejects malformed documents") {
    CHECK_THROWS_AS(decode_string("{oops"), format_error);
    CHECK_THROWS_AS(decode_string("[]"), format_error);
    CHECK_THROWS_AS(decode_string("{\"width\":2}"), format_error); // missing node
    CHECK_THROWS_AS(decode_string("{\"width\":1,\"node\":{\"atomic\":0}}"), format_error);
    CHECK_THROWS_AS(decode_string("{\"width\":2,\"node\":{\"atomic\":0},\"x\":1}"), format_error);

    // structurally well-formed but clause-violating: unsorted heart
    std::string bad =
        "{\"width\":2,\"node\":{\"amalgam\":{\"zeta_star\":0,\"tau_star\":[\"const\",1],"
        "\"heart\":[1,0],\"parts\":[{\"node\":{\"atomic\":0},\"v\":[]},"
        "{\"node\":{\"atomic\":2},\"v\":[]}]}}}";
    CHECK_THROWS_AS(decode_string(bad), format_error);
}

TEST_CASE("generator determinism and documented shapes") {
    generator_spec spec;
    spec.seed = 42;
    spec.width = 3;
    spec.height = 2;
    CHECK(encode_string(*generate(spec)) == encode_string(*generate(spec)));

    generator_spec flat;
    flat.seed = 9;
    flat.width = 3;
    flat.height = 0;
    condition_ptr a = generate(flat);
    CHECK(a->is_atomic());
    CHECK(a->atom_index() < 16);

    generator_spec triv;
    triv.seed = 9;
    triv.width = 3;
    triv.height = 1;
    triv.pool = generator_spec::pool_kind::const1;
    condition_ptr q = generate(triv);
    REQUIRE(q->is_amalgam());
    CHECK(q->tau_star()->equals(*term::const1()));
    CHECK(q->n_star() == 0);
    CHECK(q->heart().empty());

    generator_spec wide = triv;
    wide.width = 6;
    CHECK(generate(wide)->support().size() == 6);

    generator_spec bad;
    bad.width = 1;
    CHECK_THROWS_AS(generate(bad), invalid_input);
    generator_spec toofar = triv;
    toofar.height = 9;
    CHECK_THROWS_AS(generate(toofar), invalid_input);
}

TEST_CASE("pool helpers") {
    CHECK(pool_from_string("mixed") == generator_spec::pool_kind::mixed);
    CHECK(pool_from_string("const1") == generator_spec::pool_kind::const1);
    CHECK(pool_from_string("var0") == generator_spec::pool_kind::var0);
    CHECK_THROWS_AS(pool_from_string("nope"), invalid_input);
    CHECK(pool_name(generator_spec::pool_kind::mixed) == "mixed");
    CHECK(term_pool(generator_spec::pool_kind::mixed).size() == 6);
    CHECK(term_pool(generator_spec::pool_kind::var0).size() == 1);
}
