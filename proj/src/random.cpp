// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

#include "wirecons/random.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wirecons {

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) noexcept
{
    std::uint64_t h = 0x6a09e667f3bcc908ULL;
    for (auto w : words) {
        h = mix64(h ^ mix64(w));
    }
    return h;
}

double RandomStream::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::uniform_index(std::uint64_t n)
{
    if (n == 0) {
        throw std::invalid_argument("uniform_index: empty range");
    }
    // Lemire's nearly-divisionless rejection.
    std::uint64_t x = engine_();
    auto m = static_cast<unsigned __int128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            x = engine_();
            m = static_cast<unsigned __int128>(x) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

bool RandomStream::bernoulli(double p)
{
    if (p <= 0.0) {
        return false;
    }
    if (p >= 1.0) {
        return true;
    }
    return uniform() < p;
}

std::uint64_t RandomStream::poisson(double mean)
{
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("poisson: mean must be finite and non-negative");
    }
    if (mean == 0.0) {
        return 0;
    }

    // Table of pmf values over [lo, hi], walking outward from the mode until
    // the terms are negligible relative to the mode term.
    const auto mode = static_cast<std::uint64_t>(std::floor(mean));
    const double log_mean = std::log(mean);
    const double log_pmode =
        -mean + static_cast<double>(mode) * log_mean - std::lgamma(static_cast<double>(mode) + 1.0);
    constexpr double cutoff = 1e-18;

    std::vector<double> below; // pmf(mode-1), pmf(mode-2), ...
    double term = 1.0;
    for (std::uint64_t k = mode; k > 0; --k) {
        term *= static_cast<double>(k) / mean;
        if (term < cutoff) {
            break;
        }
        below.push_back(term);
    }
    std::vector<double> above; // pmf(mode), pmf(mode+1), ...
    term = 1.0;
    above.push_back(term);
    for (std::uint64_t k = mode + 1;; ++k) {
        term *= mean / static_cast<double>(k);
        if (term < cutoff) {
            break;
        }
        above.push_back(term);
    }

    const double scale = std::exp(log_pmode);
    const std::uint64_t lo = mode - below.size();
    const double u = uniform();

    double cdf = 0.0;
    for (auto it = below.rbegin(); it != below.rend(); ++it) {
        cdf += *it * scale;
        if (u < cdf) {
            return lo + static_cast<std::uint64_t>(it - below.rbegin());
        }
    }
    for (std::size_t i = 0; i < above.size(); ++i) {
        cdf += above[i] * scale;
        if (u < cdf) {
            return mode + i;
        }
    }
    return mode + above.size() - 1;
}

std::vector<std::size_t> RandomStream::sample_without_replacement(std::size_t n, std::size_t k)
{
    if (k > n) {
        throw std::invalid_argument("sample_without_replacement: k exceeds n");
    }
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_index(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

} // namespace wirecons
