#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace wifipain {

// All library randomness: std::mt19937_64 seeded via std::seed_seq, drawn
// through the helpers below rather than <random> distributions.
using Rng = std::mt19937_64;

inline constexpr const char* kRngDescription =
    "mt19937_64 seeded by seed_seq{seed_lo, seed_hi, stream_lo, stream_hi}; "
    "uniform = top 53 bits; normal = Box-Muller cosine branch";

/// Independent stream `stream` of generator family `seed`.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Named sub-seed: splitmix64 of seed xor FNV-1a(name).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view name);

/// Uniform on [0, 1).
double uniform01(Rng& rng);
/// Uniform on [lo, hi).
double uniform(Rng& rng, double lo, double hi);
/// Uniform integer in [0, n), rejection sampled.
int uniform_int(Rng& rng, int n);
double standard_normal(Rng& rng);

}  // namespace wifipain
