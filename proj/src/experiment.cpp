// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

#include "wirecons/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "wirecons/error.hpp"
#include "wirecons/metrics.hpp"

namespace wirecons {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

/// Run fn(i) for i in [0, count) on up to `workers` threads. The first
/// exception thrown by any task is rethrown after all threads join.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn)
{
    if (workers == 0) {
        workers = std::max(1U, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                    next = count;
                }
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

struct MeanStd {
    double mean = nan;
    double std = nan;
};

MeanStd mean_std(const std::vector<double>& values)
{
    std::vector<double> defined;
    for (double v : values) {
        if (!std::isnan(v)) {
            defined.push_back(v);
        }
    }
    if (defined.empty()) {
        return {};
    }
    double sum = 0.0;
    for (double v : defined) {
        sum += v;
    }
    const double mean = sum / static_cast<double>(defined.size());
    if (defined.size() == 1) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double v : defined) {
        ss += (v - mean) * (v - mean);
    }
    return {mean, std::sqrt(ss / static_cast<double>(defined.size() - 1))};
}

} // namespace

void ExperimentConfig::validate() const
{
    topology.validate();
    fault.validate();
    mechanism.validate();
    latency.validate();
    if (n_tx < 1) {
        throw ConfigError("n_tx", "must be at least 1");
    }
    if (k_rounds < 1) {
        throw ConfigError("k_rounds", "must be at least 1");
    }
    if (repetitions < 1) {
        throw ConfigError("repetitions", "must be at least 1");
    }
    if (mechanism.kind == MechanismKind::poc) {
        const double expected_nodes = topology.lambda * topology.field_side * topology.field_side;
        if (static_cast<double>(mechanism.n_w) > expected_nodes) {
            throw ConfigError("n_w", "witness count exceeds the expected node count");
        }
    }
}

World build_world(const ExperimentConfig& config, std::size_t rep)
{
    auto topology_rng = make_stream({config.seed, rep, static_cast<std::uint64_t>(StreamRole::topology)});
    auto cluster_rng = make_stream({config.seed, rep, static_cast<std::uint64_t>(StreamRole::clusters)});
    NodeSet nodes = sample_ppp(config.topology, topology_rng);
    Graph graph = build_graph(nodes, config.topology.comm_range);
    ClusterSet clusters = place_clusters(config.topology, cluster_rng);
    return World(std::move(nodes), std::move(graph), std::move(clusters));
}

RepetitionResult run_repetition(const ExperimentConfig& config, std::size_t rep,
                                const RepetitionObserver* observer)
{
    const World world = build_world(config, rep);
    if (observer && observer->on_world) {
        observer->on_world(world);
    }

    RepetitionResult result;
    result.node_count = world.nodes.size();
    if (world.nodes.empty()) {
        result.R = nan;
        result.G = nan;
        result.failure_rate = 1.0;
        result.mean_participants = nan;
        return result;
    }

    // A sparse draw can hold fewer nodes than the configured witness count;
    // then every node is a witness.
    ConsensusMechanismConfig mechanism = config.mechanism;
    if (mechanism.kind == MechanismKind::poc) {
        mechanism.n_w = std::min(mechanism.n_w, world.nodes.size());
    }

    auto init_rng = make_stream({config.seed, rep, static_cast<std::uint64_t>(StreamRole::mechanism_init)});
    MechanismState state = init_mechanism(mechanism, world.nodes, init_rng);
    ParticipationLedger ledger(world.nodes.size());

    ThroughputSample sample;
    sample.n_tx = config.n_tx;
    std::size_t failures = 0;
    std::size_t participant_total = 0;
    for (std::size_t r = 0; r < config.k_rounds; ++r) {
        RoundStreams streams{
            make_stream({config.seed, rep, static_cast<std::uint64_t>(StreamRole::round_shuffle), r}),
            make_stream({config.seed, rep, static_cast<std::uint64_t>(StreamRole::round_leader), r}),
            make_stream({config.seed, rep, static_cast<std::uint64_t>(StreamRole::round_gossip), r}),
        };
        GossipTrace trace;
        const bool want_trace = r == 0 && observer && observer->on_first_trace;
        const auto outcome = run_consensus_round(world, state, mechanism, config.latency, config.fault, streams,
                                                 ledger, want_trace ? &trace : nullptr);
        if (want_trace && outcome.leader) {
            observer->on_first_trace(trace);
        }
        if (observer && observer->on_round) {
            observer->on_round(outcome);
        }
        if (outcome.success) {
            sample.t_c_values.push_back(outcome.t_c);
            participant_total += outcome.participants.size();
        } else {
            ++failures;
        }
    }

    result.failure_rate = static_cast<double>(failures) / static_cast<double>(config.k_rounds);
    result.G = gini(ledger);
    if (sample.t_c_values.empty()) {
        result.R = nan;
        result.mean_participants = nan;
    } else {
        result.R = throughput(sample);
        result.mean_participants =
            static_cast<double>(participant_total) / static_cast<double>(sample.t_c_values.size());
    }
    return result;
}

RunResult aggregate(const ExperimentConfig& config, std::size_t point_index,
                    std::vector<RepetitionResult> repetitions)
{
    RunResult result;
    result.point_index = point_index;
    result.config = config;
    result.repetitions = std::move(repetitions);

    std::vector<double> r_values, g_values, failure_values, participant_values;
    for (const auto& rep : result.repetitions) {
        r_values.push_back(rep.R);
        g_values.push_back(rep.G);
        failure_values.push_back(rep.failure_rate);
        participant_values.push_back(rep.mean_participants);
    }
    const auto r = mean_std(r_values);
    const auto g = mean_std(g_values);
    result.R_mean = r.mean;
    result.R_std = r.std;
    result.G_mean = g.mean;
    result.G_std = g.std;
    result.failure_rate = mean_std(failure_values).mean;
    result.mean_participants = mean_std(participant_values).mean;
    return result;
}

RunResult run(const ExperimentConfig& config, unsigned workers)
{
    config.validate();
    std::vector<RepetitionResult> reps(config.repetitions);
    parallel_for(config.repetitions, workers, [&](std::size_t rep) { reps[rep] = run_repetition(config, rep); });
    return aggregate(config, 0, std::move(reps));
}

SweepAxis SweepAxis::over(std::string field, const std::vector<FieldValue>& values)
{
    SweepAxis axis;
    axis.name = field;
    for (const auto& v : values) {
        axis.points.push_back({{field, v}});
    }
    return axis;
}

std::size_t SweepSpec::point_count() const noexcept
{
    std::size_t count = 1;
    for (const auto& axis : axes) {
        if (axis.points.empty()) {
            return 0;
        }
        if (count > std::numeric_limits<std::size_t>::max() / axis.points.size()) {
            return std::numeric_limits<std::size_t>::max();
        }
        count *= axis.points.size();
    }
    return count;
}

const std::vector<std::string_view>& sweepable_fields()
{
    static const std::vector<std::string_view> fields{
        "field_side", "lambda",  "comm_range", "r_cls",     "cluster_side", "p_fail",
        "mechanism",  "kind",    "r_v",        "n_w",       "r_sfl",        "delta_sfl",
        "tau_round",  "c_agg",   "c_mech_pow", "c_mech_pos", "c_mech_poc",  "theta",
        "n_tx",       "k_rounds", "repetitions",
    };
    return fields;
}

namespace {

double as_number(std::string_view field, const FieldValue& value)
{
    if (const auto* d = std::get_if<double>(&value)) {
        return *d;
    }
    throw ConfigError(std::string(field), "expected a number");
}

std::uint64_t as_count(std::string_view field, const FieldValue& value)
{
    const double d = as_number(field, value);
    if (!(d >= 0.0) || d != std::floor(d) || d > 9.0e15) {
        throw ConfigError(std::string(field), "expected a non-negative integer");
    }
    return static_cast<std::uint64_t>(d);
}

} // namespace

void set_field(ExperimentConfig& config, std::string_view field, const FieldValue& value)
{
    if (field == "mechanism" || field == "kind") {
        const auto* name = std::get_if<std::string>(&value);
        if (name == nullptr) {
            throw ConfigError(std::string(field), "expected a mechanism name");
        }
        const auto kind = parse_mechanism(*name);
        if (!kind) {
            throw ConfigError(std::string(field), "unknown mechanism '" + *name + "'");
        }
        config.mechanism.kind = *kind;
    } else if (field == "field_side") {
        config.topology.field_side = as_number(field, value);
    } else if (field == "lambda") {
        config.topology.lambda = as_number(field, value);
    } else if (field == "comm_range") {
        config.topology.comm_range = as_number(field, value);
    } else if (field == "r_cls") {
        config.topology.r_cls = as_number(field, value);
    } else if (field == "cluster_side") {
        config.topology.cluster_side = as_number(field, value);
    } else if (field == "p_fail") {
        config.fault.p_fail = as_number(field, value);
    } else if (field == "r_v") {
        config.mechanism.r_v = as_number(field, value);
    } else if (field == "n_w") {
        config.mechanism.n_w = as_count(field, value);
    } else if (field == "r_sfl") {
        config.mechanism.r_sfl = as_number(field, value);
    } else if (field == "delta_sfl") {
        config.mechanism.delta_sfl = as_count(field, value);
    } else if (field == "tau_round") {
        config.latency.tau_round = as_number(field, value);
    } else if (field == "c_agg") {
        config.latency.c_agg = as_number(field, value);
    } else if (field == "c_mech_pow") {
        config.latency.c_mech_pow = as_number(field, value);
    } else if (field == "c_mech_pos") {
        config.latency.c_mech_pos = as_number(field, value);
    } else if (field == "c_mech_poc") {
        config.latency.c_mech_poc = as_number(field, value);
    } else if (field == "theta") {
        config.latency.theta = as_number(field, value);
    } else if (field == "n_tx") {
        config.n_tx = as_count(field, value);
    } else if (field == "k_rounds") {
        config.k_rounds = as_count(field, value);
    } else if (field == "repetitions") {
        config.repetitions = as_count(field, value);
    } else {
        throw ConfigError(std::string(field), "not a sweepable field");
    }
}

std::uint64_t point_seed(std::uint64_t master_seed, std::size_t index) noexcept
{
    return derive_seed({master_seed, static_cast<std::uint64_t>(StreamRole::sweep_point), index});
}

ExperimentConfig point_config(const SweepSpec& spec, std::size_t index)
{
    if (index >= spec.point_count()) {
        throw ArgumentError("sweep point " + std::to_string(index) + " out of range");
    }
    ExperimentConfig config = spec.base;
    std::size_t rest = index;
    for (auto axis = spec.axes.rbegin(); axis != spec.axes.rend(); ++axis) {
        const std::size_t size = axis->points.size();
        const auto& point = axis->points[rest % size];
        rest /= size;
        for (const auto& [field, value] : point) {
            set_field(config, field, value);
        }
    }
    config.seed = point_seed(spec.base.seed, index);
    return config;
}

std::vector<RunResult> sweep(const SweepSpec& spec, unsigned workers)
{
    const std::size_t points = spec.point_count();
    if (points > spec.cap) {
        throw ConfigError("axes", "sweep has " + std::to_string(points) + " points, above the cap of " +
                                      std::to_string(spec.cap));
    }

    // Resolve and validate every point before simulating anything.
    std::vector<ExperimentConfig> configs;
    configs.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        configs.push_back(point_config(spec, i));
        configs.back().validate();
    }

    // Flatten (point, repetition) pairs so that workers stay busy even when
    // points differ a lot in cost.
    std::vector<std::size_t> offsets(points + 1, 0);
    for (std::size_t i = 0; i < points; ++i) {
        offsets[i + 1] = offsets[i] + configs[i].repetitions;
    }
    std::vector<std::vector<RepetitionResult>> reps(points);
    for (std::size_t i = 0; i < points; ++i) {
        reps[i].resize(configs[i].repetitions);
    }
    parallel_for(offsets.back(), workers, [&](std::size_t task) {
        const auto point = static_cast<std::size_t>(
            std::upper_bound(offsets.begin(), offsets.end(), task) - offsets.begin() - 1);
        const std::size_t rep = task - offsets[point];
        reps[point][rep] = run_repetition(configs[point], rep);
    });

    std::vector<RunResult> results;
    results.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        results.push_back(aggregate(configs[i], i, std::move(reps[i])));
    }
    return results;
}

const char* const results_header =
    "mechanism,lambda,p_fail,r_cls,r_v,n_w,r_sfl,delta_sfl,n_tx,k_rounds,repetitions,"
    "R_mean,R_std,G_mean,G_std,failure_rate";

namespace {

std::string fmt6(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

void write_results(std::ostream& out, std::vector<RunResult> results)
{
    std::stable_sort(results.begin(), results.end(),
                     [](const RunResult& a, const RunResult& b) { return a.point_index < b.point_index; });
    out << results_header << '\n';
    for (const auto& r : results) {
        const auto& c = r.config;
        out << to_string(c.mechanism.kind) << ',' << fmt6(c.topology.lambda) << ',' << fmt6(c.fault.p_fail) << ','
            << fmt6(c.topology.r_cls) << ',' << fmt6(c.mechanism.r_v) << ',' << c.mechanism.n_w << ','
            << fmt6(c.mechanism.r_sfl) << ',' << c.mechanism.delta_sfl << ',' << c.n_tx << ',' << c.k_rounds << ','
            << c.repetitions << ',' << fmt6(r.R_mean) << ',' << fmt6(r.R_std) << ',' << fmt6(r.G_mean) << ','
            << fmt6(r.G_std) << ',' << fmt6(r.failure_rate) << '\n';
    }
}

void write_results(const std::vector<RunResult>& results, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(path, "cannot open for writing");
    }
    write_results(out, results);
    out.flush();
    if (!out) {
        throw IoError(path, "write failed");
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(path, "cannot open for reading");
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError(path, "read failed");
    }
    return text;
}

} // namespace wirecons
