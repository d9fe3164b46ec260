#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "histforce/checks.hpp"
#include "histforce/condition.hpp"
#include "histforce/errors.hpp"
#include "histforce/generate.hpp"
#include "histforce/term.hpp"

using namespace histforce;

namespace {

condition_ptr chain6() {
    std::vector<condition::part> parts;
    for (gen_index i = 0; i < 6; ++i)
        parts.push_back({condition::atomic(6, i), {i}});
    return condition::amalgamate(0, term::var(0), {}, parts);
}

bool all_pass(const std::vector<check_report>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

std::string failing_laws(const std::vector<check_report>& reports) {
    std::string out;
    for (const auto& r : reports)
        if (!r.pass) out += r.name + ": " + r.counterexample.dump() + "\n";
    return out.empty() ? std::string("(all pass)") : out;
}

} // namespace

TEST_CASE("the suite passes on an atomic condition") {
    auto reports = run_suite(condition::atomic(3, 5));
    CHECK(reports.size() >= 8);
    INFO(failing_laws(reports));
    CHECK(all_pass(reports));
    for (const auto& r : reports) {
        CHECK(!r.name.empty());
        CHECK(r.condition_id.size() == 16);
        CHECK(r.counterexample.is_null());
    }
}

TEST_CASE("the suite passes on generated conditions") {
    for (std::uint64_t seed : {2ull, 4ull}) {
        generator_spec spec;
        spec.seed = seed;
        spec.width = 2;
        spec.height = 2;
        auto reports = run_suite(generate(spec));
        INFO("seed ", seed, ": ", failing_laws(reports));
        CHECK(all_pass(reports));
    }
}

TEST_CASE("the suite passes on the width-6 chain") {
    auto reports = run_suite(chain6());
    INFO(failing_laws(reports));
    CHECK(all_pass(reports));
}

TEST_CASE("majority chain facts") {
    condition_ptr q = chain6();
    auto chain = build_maj_chain(q);
    CHECK(chain.size() == 2); // floor(6 / 3) complete triples
    check_report rep = check_majority_chain(q);
    INFO(rep.counterexample.dump());
    CHECK(rep.pass);
    CHECK_THROWS_AS(build_maj_chain(condition::atomic(6, 0)), invalid_input);
    CHECK(check_majority_chain(condition::atomic(6, 0)).pass); // vacuous
}

TEST_CASE("a corrupted history table is caught") {
    condition_ptr bad = make_corrupted_history(chain6());
    auto reports = run_suite(bad);
    CHECK(!all_pass(reports));
}

TEST_CASE("a shared heart starves a fingerprint pattern") {
    // Two-story tower whose stories share the heart {0}: level-0 entries are
    // forced alongside level-1 entries, so the pattern {1} is never a
    // fingerprint and the realization law must fail, naming that pattern.
    condition_ptr a0 = condition::atomic(2, 0);
    condition_ptr a2 = condition::atomic(2, 2);
    term_ptr x0 = term::var(0);
    condition_ptr t1 = condition::amalgamate(0, x0, {}, {{a0, {0}}, {a2, {2}}});
    condition_ptr t1b = relabel(t1, order_map::between(t1->support(), {0, 4}));
    condition_ptr t2 = condition::amalgamate(0, x0, {0}, {{t1, {2}}, {t1b, {4}}});

    check_report rep = check_history_invariants(t2);
    REQUIRE(!rep.pass);
    CHECK(rep.counterexample["law"] == "every level set is realized");
    CHECK((rep.counterexample["levels"] == nlohmann::ordered_json::array({1})));
}

TEST_CASE("chain-collapse instances and their preconditions") {
    condition_ptr q = chain6();
    term_ptr x0 = term::var(0);

    check_report ok = check_chain_collapse(q, x0, {0}, {0}, {0}, {0});
    INFO(ok.counterexample.dump());
    CHECK(ok.pass);

    auto message_of = [](auto&& fn) -> std::string {
        try {
            fn();
        } catch (const invalid_input& e) {
            return e.what();
        }
        return "no error";
    };

    // w0 outside U[q, z0]
    CHECK(message_of([&] { check_chain_collapse(q, x0, {2}, {2}, {}, {}); })
              .find("(pre)") != std::string::npos);
    // |w0| differs from |w1|
    CHECK(message_of([&] { check_chain_collapse(q, x0, {0}, {0}, {}, {0}); })
              .find("(i)") != std::string::npos);
    // w1 is not the image of w0 under the signature isomorphism
    CHECK(message_of([&] { check_chain_collapse(q, x0, {0}, {1}, {0}, {0}); })
              .find("(iii)") != std::string::npos);
}

TEST_CASE("spot checks on a width-6 generated condition") {
    generator_spec spec;
    spec.seed = 6;
    spec.width = 6;
    spec.height = 1;
    condition_ptr p = generate(spec);

    check_report flips = check_flip_closure(p);
    INFO(flips.counterexample.dump());
    CHECK(flips.pass);
    CHECK(check_clauses(p).pass);
    CHECK(check_generator_independence(p).pass);
    CHECK(check_chain_collapse_sweep(p).pass);
    CHECK(check_serialization_roundtrip(p).pass);
}
