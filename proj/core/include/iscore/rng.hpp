#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace iscore {

// All randomness in the library flows through Rng seeded via derive_seed().
// The generator is std::mt19937_64 (a fixed, portable sequence) and every
// distribution transform below is hand-written on top of raw 64-bit output,
// so identical seeds give identical streams on any platform.
//
// Stream derivation: independent substreams are obtained by mixing a base
// seed with an integer index or a string label,
//
//   derive_seed(base, r)       -> substream r of base (replicates, rows, ...)
//   derive_seed(base, "label") -> named substream (purpose tags)
//
// Derivation is pure, so work scheduled across threads in any order sees the
// same streams. Consumers document their own derivation chains next to the
// code that draws from them.

// splitmix64 finalizer; the core bit mixer behind seed derivation.
std::uint64_t mix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag);
std::uint64_t derive_seed(std::uint64_t base, std::string_view label);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01();

    // Standard normal via Box-Muller; the second value of each pair is
    // cached, so draws come in a fixed order regardless of call sites.
    double normal();

    // Uniform integer on [0, n), rejection-sampled (unbiased).
    std::uint64_t uniform_int(std::uint64_t n);

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// k distinct indices from {0, ..., n-1}, returned in ascending order.
// Partial Fisher-Yates driven by rng.uniform_int, then sorted.
std::vector<int> sample_without_replacement(Rng& rng, int n, int k);

} // namespace iscore
