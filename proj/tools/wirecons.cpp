// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: single runs, sweeps, the two figure presets, and
// the metric utilities.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wirecons/error.hpp"
#include "wirecons/experiment.hpp"
#include "wirecons/metrics.hpp"
#include "wirecons/presets.hpp"

namespace {

using namespace wirecons;

constexpr int exit_config = 2;
constexpr int exit_io = 3;

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
};

struct RunExtras {
    std::string rounds_out;
    std::string nodes_out;
    std::string clusters_out;
    std::string trace_out;
};

struct PresetFlags {
    std::string out_path;
    std::optional<std::uint64_t> seed;
    double rcls_baseline = 0.5;
    unsigned workers = 1;
    std::optional<std::size_t> repetitions;
    std::optional<std::size_t> k_rounds;
    std::string spec_out;
};

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(path, "cannot open for writing");
    }
    return out;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void print_summary(const std::vector<RunResult>& results)
{
    for (const auto& r : results) {
        std::cout << to_string(r.config.mechanism.kind) << " lambda=" << fmt(r.config.topology.lambda)
                  << " p_fail=" << fmt(r.config.fault.p_fail) << " r_cls=" << fmt(r.config.topology.r_cls)
                  << "  R=" << fmt(r.R_mean) << " +/- " << fmt(r.R_std) << " tx/s"
                  << "  G=" << fmt(r.G_mean) << " +/- " << fmt(r.G_std)
                  << "  failure_rate=" << fmt(r.failure_rate) << '\n';
    }
}

int cmd_run(const CommonOptions& opts, const RunExtras& extras)
{
    auto config = parse_experiment_config(read_file(opts.config_path));
    if (opts.seed) {
        config.seed = *opts.seed;
    }
    config.validate();

    if (!extras.rounds_out.empty() || !extras.nodes_out.empty() || !extras.clusters_out.empty() ||
        !extras.trace_out.empty()) {
        std::optional<std::ofstream> rounds;
        if (!extras.rounds_out.empty()) {
            rounds = open_out(extras.rounds_out);
            write_rounds_header(*rounds);
        }
        RepetitionObserver observer;
        observer.on_world = [&](const World& world) {
            if (!extras.nodes_out.empty()) {
                auto out = open_out(extras.nodes_out);
                write_nodes_csv(out, world.nodes);
            }
            if (!extras.clusters_out.empty()) {
                auto out = open_out(extras.clusters_out);
                write_clusters_csv(out, world.clusters);
            }
        };
        if (rounds) {
            observer.on_round = [&](const RoundOutcome& o) { write_round_row(*rounds, o, config.mechanism.kind); };
        }
        if (!extras.trace_out.empty()) {
            observer.on_first_trace = [&](const GossipTrace& trace) {
                auto out = open_out(extras.trace_out);
                write_trace_csv(out, trace);
            };
        }
        run_repetition(config, 0, &observer);
    }

    const auto result = run(config, opts.workers);
    write_results({result}, opts.out_path);
    print_summary({result});
    return 0;
}

int cmd_sweep(const CommonOptions& opts)
{
    auto spec = parse_sweep_spec(read_file(opts.config_path));
    if (opts.seed) {
        spec.base.seed = *opts.seed;
    }
    const auto results = sweep(spec, opts.workers);
    write_results(results, opts.out_path);
    print_summary(results);
    return 0;
}

int cmd_preset(const PresetFlags& flags, bool fig2)
{
    PresetOptions options;
    if (flags.seed) {
        options.seed = *flags.seed;
    }
    options.rcls_baseline = flags.rcls_baseline;
    options.repetitions = flags.repetitions;
    options.k_rounds = flags.k_rounds;
    const auto spec = fig2 ? fig2_spec(options) : fig3_spec(options);
    if (!flags.spec_out.empty()) {
        auto out = open_out(flags.spec_out);
        out << to_json(spec);
    }

    const auto results = sweep(spec, flags.workers);
    write_results(results, flags.out_path);

    if (fig2) {
        std::cout << "mechanism,lambda,R_mean,R_std,failure_rate\n";
        for (const auto& r : results) {
            std::cout << to_string(r.config.mechanism.kind) << ',' << fmt(r.config.topology.lambda) << ','
                      << fmt(r.R_mean) << ',' << fmt(r.R_std) << ',' << fmt(r.failure_rate) << '\n';
        }
    } else {
        std::cout << "mechanism,r_cls,p_fail,G_mean,G_std\n";
        for (const auto& r : results) {
            std::cout << to_string(r.config.mechanism.kind) << ',' << fmt(r.config.topology.r_cls) << ','
                      << fmt(r.config.fault.p_fail) << ',' << fmt(r.G_mean) << ',' << fmt(r.G_std) << '\n';
        }
    }
    return 0;
}

int cmd_gini(const std::string& counts_csv)
{
    ParticipationLedger ledger;
    std::stringstream ss(counts_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first == std::string::npos) {
            throw ConfigError("counts", "empty value");
        }
        item = item.substr(first, last - first + 1);
        if (item.find_first_not_of("0123456789") != std::string::npos) {
            throw ConfigError("counts", "'" + item + "' is not a non-negative integer");
        }
        try {
            ledger.counts.push_back(std::stoull(item));
        } catch (const std::out_of_range&) {
            throw ConfigError("counts", "'" + item + "' is too large");
        }
    }
    if (ledger.counts.empty()) {
        throw ConfigError("counts", "at least one value is required");
    }
    for (auto c : ledger.counts) {
        ledger.rounds_observed = std::max(ledger.rounds_observed, c);
    }
    std::printf("%.6f\n", gini(ledger));
    return 0;
}

int cmd_usl(double alpha, double beta, std::uint64_t n_max)
{
    if (!(alpha >= 0.0) || !(beta >= 0.0)) {
        throw ConfigError(alpha >= 0.0 ? "beta" : "alpha", "must be non-negative");
    }
    if (n_max < 1) {
        throw ConfigError("n-max", "must be at least 1");
    }
    const UslParams params{alpha, beta};
    std::cout << "n,S\n";
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        std::cout << n << ',' << fmt(usl(n, params)) << '\n';
    }
    std::cout << "argmax," << usl_argmax(n_max, params) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Wireless blockchain consensus simulator"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    RunExtras run_extras;
    auto* run_cmd = app.add_subcommand("run", "Run one experiment configuration");
    run_cmd->add_option("--config", run_opts.config_path, "Experiment config (JSON)")->required();
    run_cmd->add_option("--out", run_opts.out_path, "Results CSV")->required();
    run_cmd->add_option("--seed", run_opts.seed, "Override the config seed");
    run_cmd->add_option("--workers", run_opts.workers, "Worker threads (0 = all cores)");
    run_cmd->add_option("--rounds-out", run_extras.rounds_out, "Per-round CSV of repetition 0");
    run_cmd->add_option("--nodes-out", run_extras.nodes_out, "Node positions CSV of repetition 0");
    run_cmd->add_option("--clusters-out", run_extras.clusters_out, "Cluster boxes CSV of repetition 0");
    run_cmd->add_option("--trace-out", run_extras.trace_out, "Gossip trace CSV of round 0, repetition 0");

    CommonOptions sweep_opts;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
    sweep_cmd->add_option("--config", sweep_opts.config_path, "Sweep spec (JSON)")->required();
    sweep_cmd->add_option("--out", sweep_opts.out_path, "Results CSV")->required();
    sweep_cmd->add_option("--seed", sweep_opts.seed, "Override the master seed");
    sweep_cmd->add_option("--workers", sweep_opts.workers, "Worker threads (0 = all cores)");

    auto add_preset_flags = [](CLI::App* cmd, PresetFlags& flags) {
        cmd->add_option("--out", flags.out_path, "Results CSV")->required();
        cmd->add_option("--seed", flags.seed, "Master seed (default 1)");
        cmd->add_option("--rcls-baseline", flags.rcls_baseline, "Cluster coverage for fixed-r_cls series")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--workers", flags.workers, "Worker threads (0 = all cores)");
        cmd->add_option("--repetitions", flags.repetitions, "Topology draws per point (default 20)");
        cmd->add_option("--rounds", flags.k_rounds, "Consensus rounds per run (default 1000)");
        cmd->add_option("--spec-out", flags.spec_out, "Write the equivalent sweep spec (JSON)");
    };
    PresetFlags fig2_flags;
    auto* fig2_cmd = app.add_subcommand("fig2", "Throughput vs node density preset");
    add_preset_flags(fig2_cmd, fig2_flags);
    PresetFlags fig3_flags;
    auto* fig3_cmd = app.add_subcommand("fig3", "Decentralization vs failure rate preset");
    add_preset_flags(fig3_cmd, fig3_flags);

    std::string counts;
    auto* gini_cmd = app.add_subcommand("gini", "Gini coefficient of participation counts");
    gini_cmd->add_option("--counts", counts, "Comma-separated non-negative integers")->required();

    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t n_max = 0;
    auto* usl_cmd = app.add_subcommand("usl", "Universal scalability law curve");
    usl_cmd->add_option("--alpha", alpha, "Contention coefficient")->required();
    usl_cmd->add_option("--beta", beta, "Coherency coefficient")->required();
    usl_cmd->add_option("--n-max", n_max, "Largest n")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            return cmd_run(run_opts, run_extras);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(sweep_opts);
        }
        if (fig2_cmd->parsed()) {
            return cmd_preset(fig2_flags, true);
        }
        if (fig3_cmd->parsed()) {
            return cmd_preset(fig3_flags, false);
        }
        if (gini_cmd->parsed()) {
            return cmd_gini(counts);
        }
        if (usl_cmd->parsed()) {
            return cmd_usl(alpha, beta, n_max);
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
