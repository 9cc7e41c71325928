// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace wirecons {

/// What a derived random stream is used for. The numeric values are part of
/// the seed derivation and must never be renumbered.
enum class StreamRole : std::uint64_t {
    topology = 1,
    clusters = 2,
    mechanism_init = 3,
    round_shuffle = 4,
    round_leader = 5,
    round_gossip = 6,
    sweep_point = 7,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Hash an ordered tuple of 64-bit words into a seed. Used to derive child
/// streams from (master seed, repetition, role, round) without ever
/// advancing a shared generator, so derivation is order independent.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) noexcept;

/// A seeded stream of random numbers.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The distributions are implemented here rather than taken from
/// <random> because the standard library distributions are not required to
/// produce the same values across implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Unbiased uniform integer in [0, n). Requires n > 0.
    std::uint64_t uniform_index(std::uint64_t n);

    /// True with probability p. p <= 0 and p >= 1 consume no randomness.
    bool bernoulli(double p);

    /// Poisson variate by inverse transform over a pmf table centered on the
    /// mode. Exactly one uniform is consumed per call (none for mean == 0).
    std::uint64_t poisson(double mean);

    /// k distinct values drawn uniformly from [0, n), in draw order.
    /// Partial Fisher-Yates; requires k <= n.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
};

inline RandomStream make_stream(std::initializer_list<std::uint64_t> words)
{
    return RandomStream(derive_seed(words));
}

} // namespace wirecons
