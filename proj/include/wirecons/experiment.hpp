// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "wirecons/consensus.hpp"
#include "wirecons/gossip.hpp"
#include "wirecons/topology.hpp"

namespace wirecons {

struct ExperimentConfig {
    TopologyConfig topology;
    FaultConfig fault;
    ConsensusMechanismConfig mechanism;
    LatencyConfig latency;
    std::uint64_t n_tx = 10;
    std::size_t k_rounds = 1000;
    std::size_t repetitions = 20;
    std::uint64_t seed = 0;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Per-topology-draw outcome.
struct RepetitionResult {
    std::size_t node_count = 0;
    /// NaN when every round failed.
    double R = 0.0;
    double G = 0.0;
    double failure_rate = 0.0;
    /// Mean participants per successful round; NaN when none succeeded.
    double mean_participants = 0.0;
};

struct RunResult {
    std::size_t point_index = 0;
    ExperimentConfig config;
    std::vector<RepetitionResult> repetitions;

    // Means and sample standard deviations over repetitions where the value
    // is defined; NaN if it is defined for none.
    double R_mean = 0.0;
    double R_std = 0.0;
    double G_mean = 0.0;
    double G_std = 0.0;
    double failure_rate = 0.0;
    double mean_participants = 0.0;
};

/// Hooks for looking inside a single repetition.
struct RepetitionObserver {
    std::function<void(const World&)> on_world;
    std::function<void(const RoundOutcome&)> on_round;
    /// Called with the gossip trace (failed links recorded) of round 0.
    std::function<void(const GossipTrace&)> on_first_trace;
};

/// Topology, clusters and graph for repetition `rep` of `config`.
World build_world(const ExperimentConfig& config, std::size_t rep);

RepetitionResult run_repetition(const ExperimentConfig& config, std::size_t rep,
                                const RepetitionObserver* observer = nullptr);

/// Combine per-repetition values into a RunResult.
RunResult aggregate(const ExperimentConfig& config, std::size_t point_index,
                    std::vector<RepetitionResult> repetitions);

/// All repetitions of one configuration. `workers` = 0 uses the hardware
/// concurrency; the result does not depend on it.
RunResult run(const ExperimentConfig& config, unsigned workers = 1);

/// A value for a sweepable field: numbers, or a mechanism name.
using FieldValue = std::variant<double, std::string>;

/// Field assignments applied together at one point of an axis. A plain axis
/// assigns its own name; a compound axis (e.g. a figure's series) assigns
/// several fields at once.
using AxisPoint = std::vector<std::pair<std::string, FieldValue>>;

struct SweepAxis {
    std::string name;
    std::vector<AxisPoint> points;

    /// Axis over a single field.
    static SweepAxis over(std::string field, const std::vector<FieldValue>& values);
};

struct SweepSpec {
    ExperimentConfig base;
    std::vector<SweepAxis> axes;
    std::size_t cap = 10000;

    std::size_t point_count() const noexcept;
};

/// Names accepted by set_field.
const std::vector<std::string_view>& sweepable_fields();

/// Throws ConfigError for unknown fields or ill-typed values.
void set_field(ExperimentConfig& config, std::string_view field, const FieldValue& value);

/// Seed of point `index` under `master_seed`.
std::uint64_t point_seed(std::uint64_t master_seed, std::size_t index) noexcept;

/// Configuration of point `index`; the first axis varies slowest.
ExperimentConfig point_config(const SweepSpec& spec, std::size_t index);

/// Cross product of the axes, one RunResult per point in index order.
/// Throws ConfigError if the product exceeds spec.cap.
std::vector<RunResult> sweep(const SweepSpec& spec, unsigned workers = 1);

extern const char* const results_header;

/// One header line, then one row per result in point-index order. Floating
/// values carry 6 significant digits.
void write_results(std::ostream& out, std::vector<RunResult> results);
void write_results(const std::vector<RunResult>& results, const std::string& path);

// JSON documents mirroring the field names of ExperimentConfig / SweepSpec.
ExperimentConfig parse_experiment_config(std::string_view json_text);
SweepSpec parse_sweep_spec(std::string_view json_text);
std::string to_json(const ExperimentConfig& config);
std::string to_json(const SweepSpec& spec);

/// Read a whole file; IoError naming the path on failure.
std::string read_file(const std::string& path);

} // namespace wirecons
