// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wirecons {

/// Per-node participation counts over an observation window of
/// `rounds_observed` consensus rounds.
struct ParticipationLedger {
    std::vector<std::uint64_t> counts;
    std::uint64_t rounds_observed = 0;

    ParticipationLedger() = default;
    explicit ParticipationLedger(std::size_t n) : counts(n, 0) {}

    std::size_t size() const noexcept { return counts.size(); }
};

struct ThroughputSample {
    std::uint64_t n_tx = 1;
    /// Durations of successful rounds, seconds.
    std::vector<double> t_c_values;
};

/// Contention (alpha) and coherency (beta) coefficients.
struct UslParams {
    double alpha = 0.0;
    double beta = 0.0;
};

/// Gini coefficient of the participation counts: the sum of |x_i - x_j| over
/// all ordered pairs divided by 2 n^2 mean(x). Zero when nobody participated.
///
/// Evaluated in O(n log n) from the sorted counts with exact integer
/// arithmetic for the numerator and denominator.
double gini(const ParticipationLedger& ledger);

/// Transactions per second: n_tx over the mean round duration.
double throughput(const ThroughputSample& sample);

/// Universal scalability law speedup n / (1 + alpha (n-1) + beta n (n-1)).
double usl(std::uint64_t n, const UslParams& params);

/// Integer n in [1, n_max] maximizing usl(n); the smallest on ties.
std::uint64_t usl_argmax(std::uint64_t n_max, const UslParams& params);

/// Mechanism names from most to least decentralized: ascending G, ties broken
/// by name.
std::vector<std::string> decentralization_order(const std::map<std::string, double>& ginis);

} // namespace wirecons
