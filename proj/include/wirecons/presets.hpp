// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "wirecons/experiment.hpp"

namespace wirecons {

struct PresetOptions {
    std::uint64_t seed = 1;
    /// Cluster coverage for series that do not sweep r_cls.
    double rcls_baseline = 0.5;
    std::optional<std::size_t> repetitions;
    std::optional<std::size_t> k_rounds;
};

/// Throughput against node density: PoW, PoS (r_v = 0.2) and PoC (n_w = 50,
/// r_sfl = 0.9, delta_sfl = 0) at p_fail = 0.05 and 10 transactions per
/// block, lambda = 100, 200, ..., 1000. Mechanism is the outer axis.
SweepSpec fig2_spec(const PresetOptions& options = {});

/// Gini against p_fail = 0, 0.1, ..., 0.9 at lambda = 400. Series: PoW at
/// r_cls 0.1, 0.3 and 0.5, then PoS and PoC at the baseline r_cls. Series is
/// the outer axis.
SweepSpec fig3_spec(const PresetOptions& options = {});

/// Number of fig3 series.
inline constexpr std::size_t fig3_series_count = 5;

} // namespace wirecons
