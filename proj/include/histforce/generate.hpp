#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "histforce/condition.hpp"

namespace histforce {

// splitmix64: tiny, well-known, reproducible across platforms.  draw(n) is
// next() modulo n; the slight modulo bias is irrelevant here and keeps the
// draw trace trivial to replay.
class splitmix64 {
public:
    explicit splitmix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t draw(std::uint64_t n); // uniform-ish in [0, n), n >= 1

private:
    std::uint64_t state_;
};

struct generator_spec {
    enum class pool_kind { mixed, const1, var0 };
    enum class heart_kind { none, occasional };

    std::uint64_t seed = 0;
    std::uint32_t width = 2;
    std::uint32_t height = 0;
    pool_kind pool = pool_kind::mixed;
    // none: every stage amalgamates over an empty heart (all fingerprint
    // patterns are then realized, a fact the check battery relies on).
    // occasional: levels >= 2 draw a heart of size 0 or 1.
    heart_kind hearts = heart_kind::none;
    std::uint32_t block_gap = 1; // spacing between consecutive index blocks
};

// The term pools.  mixed = {Const1, Var0, Var0&Var1, Var0|Var1, Var0&~Var1,
// ~Var0}; const1 and var0 are the singleton pools.
std::vector<term_ptr> term_pool(generator_spec::pool_kind kind);

generator_spec::pool_kind pool_from_string(std::string_view name);
std::string_view pool_name(generator_spec::pool_kind kind);

// Deterministic bottom-up construction.  Draw order, all from one splitmix64
// stream seeded with spec.seed:
//   1. base index: draw(16)
//   2. per level 1..height, in order:
//      a. term: draw(|pool filtered to arity <= level support size|)
//      b. official part: draw(width)
//      c. heart size (only when hearts=occasional and level >= 2):
//         draw(2), clamped to |u|-1; no draw otherwise
//      d. v positions: Floyd sampling, arity-many draws
//        (for i = m-arity .. m-1: r = draw(i+1); take r unless taken, else i)
// Each level relabels the previous condition onto width-many consecutive
// index blocks above the heart, separated by block_gap, and amalgamates.
// Same spec, same condition, byte for byte.
condition_ptr generate(const generator_spec& spec);

} // namespace histforce
