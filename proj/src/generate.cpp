#include "histforce/generate.hpp"

#include <algorithm>

#include "histforce/errors.hpp"

namespace histforce {

std::uint64_t splitmix64::draw(std::uint64_t n) {
    if (n == 0) throw invalid_input("draw from an empty range");
    return next() % n;
}

std::vector<term_ptr> term_pool(generator_spec::pool_kind kind) {
    switch (kind) {
    case generator_spec::pool_kind::const1:
        return {term::const1()};
    case generator_spec::pool_kind::var0:
        return {term::var(0)};
    case generator_spec::pool_kind::mixed:
        break;
    }
    const term_ptr x0 = term::var(0);
    const term_ptr x1 = term::var(1);
    return {
        term::const1(),
        x0,
        term::conjunction_of(x0, x1),
        term::disjunction_of(x0, x1),
        term::conjunction_of(x0, term::negation_of(x1)),
        term::negation_of(x0),
    };
}

generator_spec::pool_kind pool_from_string(std::string_view name) {
    if (name == "mixed") return generator_spec::pool_kind::mixed;
    if (name == "const1") return generator_spec::pool_kind::const1;
    if (name == "var0") return generator_spec::pool_kind::var0;
    throw invalid_input("unknown term pool \"" + std::string(name) +
                        "\" (expected mixed, const1 or var0)");
}

std::string_view pool_name(generator_spec::pool_kind kind) {
    switch (kind) {
    case generator_spec::pool_kind::mixed:
        return "mixed";
    case generator_spec::pool_kind::const1:
        return "const1";
    case generator_spec::pool_kind::var0:
        return "var0";
    }
    return "?";
}

namespace {

// Floyd's subset sampling: exactly n draws, n distinct values in [0, m).
std::vector<std::size_t> sample_positions(splitmix64& rng, std::size_t m, std::size_t n) {
    std::vector<std::size_t> out;
    out.reserve(n);
    for (std::size_t i = m - n; i < m; ++i) {
        const auto r = static_cast<std::size_t>(rng.draw(i + 1));
        if (std::find(out.begin(), out.end(), r) != out.end()) {
            out.push_back(i);
        } else {
            out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

condition_ptr generate(const generator_spec& spec) {
    if (spec.width < 2) throw invalid_input("generate: width must be at least 2");
    if (spec.height > kMaxHeight) throw invalid_input("generate: height exceeds the stage cap");

    splitmix64 rng(spec.seed);
    const auto base = static_cast<gen_index>(rng.draw(16));
    condition_ptr cur = condition::atomic(spec.width, base);
    const std::vector<term_ptr> pool = term_pool(spec.pool);

    for (std::uint32_t level = 1; level <= spec.height; ++level) {
        const std::vector<gen_index>& u_prev = cur->support();
        const std::size_t m = u_prev.size();

        std::vector<term_ptr> usable;
        for (const auto& t : pool) {
            if (t->arity() <= m) usable.push_back(t);
        }
        term_ptr tau = usable[rng.draw(usable.size())];
        const auto zeta = static_cast<std::uint32_t>(rng.draw(spec.width));

        std::size_t heart_size = 0;
        if (spec.hearts == generator_spec::heart_kind::occasional && level >= 2) {
            heart_size = std::min<std::size_t>(rng.draw(2), m - 1);
        }
        std::vector<gen_index> heart(u_prev.begin(),
                                     u_prev.begin() + static_cast<std::ptrdiff_t>(heart_size));

        const std::vector<std::size_t> v_positions = sample_positions(rng, m, tau->arity());

        const std::size_t block_len = m - heart_size;
        gen_index start = heart.empty() ? base : heart.back() + 1 + spec.block_gap;
        std::vector<condition::part> parts;
        parts.reserve(spec.width);
        for (std::uint32_t xi = 0; xi < spec.width; ++xi) {
            std::vector<gen_index> target = heart;
            target.reserve(m);
            for (std::size_t k = 0; k < block_len; ++k) {
                target.push_back(start + static_cast<gen_index>(k));
            }
            condition::part part;
            part.child = relabel(cur, order_map::between(u_prev, target));
            part.v.reserve(v_positions.size());
            for (std::size_t pos : v_positions) part.v.push_back(target[pos]);
            parts.push_back(std::move(part));
            start += static_cast<gen_index>(block_len + spec.block_gap);
        }
        cur = condition::amalgamate(zeta, tau, std::move(heart), std::move(parts));
    }
    return cur;
}

} // namespace histforce
