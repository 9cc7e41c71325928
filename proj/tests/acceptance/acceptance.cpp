// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. Prints one PASS/FAIL line per criterion, followed by
// indented detail lines, and exits non-zero if any selected criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "oracles.hpp"
#include "wirecons/experiment.hpp"
#include "wirecons/gossip.hpp"
#include "wirecons/metrics.hpp"
#include "wirecons/presets.hpp"
#include "wirecons/random.hpp"
#include "wirecons/topology.hpp"

using namespace wirecons;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    void require(bool ok, const std::string& what)
    {
        details.push_back(std::string(ok ? "ok    " : "FAILED") + "  " + what);
        pass = pass && ok;
    }
    void note(const std::string& what) { details.push_back("        " + what); }
};

std::string fmt(const char* format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

struct Context {
    unsigned workers = 0;
    std::string cli;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::uint64_t> random_counts(RandomStream& rng)
{
    std::vector<std::uint64_t> x(1 + rng.uniform_index(200));
    // Mix small and very large magnitudes.
    const std::uint64_t hi = rng.bernoulli(0.5) ? 1 + rng.uniform_index(10) : 1 + rng.uniform_index(1000000);
    for (auto& v : x) {
        v = rng.uniform_index(hi + 1);
    }
    return x;
}

Outcome gini_oracle(const Context&)
{
    Outcome o;
    const auto start = Clock::now();
    RandomStream rng(derive_seed({2024, 1}));
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto x = random_counts(rng);
        ParticipationLedger ledger;
        ledger.counts = x;
        ledger.rounds_observed = *std::max_element(x.begin(), x.end());
        worst = std::max(worst, std::fabs(gini(ledger) - oracle::gini_double_loop(x)));
    }
    const double elapsed = seconds_since(start);
    o.require(worst <= 1e-12, fmt("max |G - G_oracle| over 1000 vectors = %.3g (limit 1e-12)", worst));
    o.require(elapsed < 10.0, fmt("runtime %.2f s (limit 10 s)", elapsed));
    return o;
}

double gini_of(std::vector<std::uint64_t> counts)
{
    ParticipationLedger ledger;
    ledger.counts = std::move(counts);
    ledger.rounds_observed = *std::max_element(ledger.counts.begin(), ledger.counts.end());
    return gini(ledger);
}

Outcome gini_analytic(const Context&)
{
    Outcome o;
    for (std::size_t n : {1, 2, 7, 200}) {
        const double g = gini_of(std::vector<std::uint64_t>(n, 13));
        o.require(g == 0.0, fmt("equal vector, n = %zu: G = %.17g", n, g));
    }
    for (std::size_t n : {2, 5, 10}) {
        std::vector<std::uint64_t> x(n, 0);
        x[n - 1] = 9;
        const double g = gini_of(x);
        const double expected = static_cast<double>(n - 1) / static_cast<double>(n);
        o.require(g == expected, fmt("single holder, n = %zu: G = %.17g, expected %.17g", n, g, expected));
    }
    const double half = gini_of({0, 1});
    o.require(half == 0.5, fmt("[0, 1]: G = %.17g", half));
    return o;
}

Outcome ppp_statistics(const Context&)
{
    Outcome o;
    const auto start = Clock::now();
    TopologyConfig config;
    const int draws = 2000;
    std::vector<double> counts, thinned;
    for (int i = 0; i < draws; ++i) {
        auto rng = make_stream({31337, static_cast<std::uint64_t>(i)});
        const auto nodes = sample_ppp(config, rng);
        counts.push_back(static_cast<double>(nodes.size()));
        thinned.push_back(static_cast<double>(thin(nodes, 0.2, rng).size()));
    }
    double mean = 0.0;
    for (double c : counts) {
        mean += c;
    }
    mean /= draws;
    double var = 0.0;
    for (double c : counts) {
        var += (c - mean) * (c - mean);
    }
    var /= draws - 1;
    o.require(mean >= 380.0 && mean <= 420.0, fmt("sample mean %.2f (need [380, 420])", mean));
    o.require(var / mean >= 0.9 && var / mean <= 1.1, fmt("dispersion index %.4f (need [0.9, 1.1])", var / mean));

    // Chi-square goodness of fit of the thinned counts against Poisson(80),
    // merging tail bins until each expects at least 5 draws.
    const boost::math::poisson_distribution<> target(80.0);
    std::vector<std::pair<double, double>> bins; // observed, expected
    double obs = 0.0, exp = 0.0;
    const int k_max = 200;
    for (int k = 0; k <= k_max; ++k) {
        obs += static_cast<double>(std::count(thinned.begin(), thinned.end(), static_cast<double>(k)));
        exp += draws * (k == k_max ? boost::math::cdf(complement(target, k - 1)) : boost::math::pdf(target, k));
        if (exp >= 5.0) {
            bins.emplace_back(obs, exp);
            obs = exp = 0.0;
        }
    }
    if (exp > 0.0 || obs > 0.0) {
        bins.back().first += obs;
        bins.back().second += exp;
    }
    double stat = 0.0;
    for (const auto& [ob, ex] : bins) {
        stat += (ob - ex) * (ob - ex) / ex;
    }
    const double dof = static_cast<double>(bins.size() - 1);
    const double p_value = boost::math::cdf(complement(boost::math::chi_squared_distribution<>(dof), stat));
    o.require(p_value >= 0.01,
              fmt("thinned q = 0.2 vs Poisson(80): chi2 = %.2f, dof = %.0f, p = %.4f (reject below 0.01)", stat, dof,
                  p_value));
    const double elapsed = seconds_since(start);
    o.require(elapsed < 30.0, fmt("runtime %.2f s (limit 30 s)", elapsed));
    return o;
}

Outcome gossip_bfs(const Context&)
{
    Outcome o;
    const auto start = Clock::now();
    int exact = 0;
    for (std::uint64_t t = 0; t < 50; ++t) {
        auto setup = make_stream({555, t});
        TopologyConfig config;
        config.lambda = setup.uniform(100.0, 800.0);
        config.r_cls = setup.uniform(0.0, 0.6);
        auto node_rng = make_stream({555, t, 1});
        auto cluster_rng = make_stream({555, t, 2});
        const auto nodes = sample_ppp(config, node_rng);
        const auto graph = build_graph(nodes, config.comm_range);
        const auto clusters = place_clusters(config, cluster_rng);
        if (nodes.empty()) {
            continue;
        }
        const NodeId source = setup.uniform_index(nodes.size());
        auto gossip_rng = make_stream({555, t, 3});
        const auto trace = propagate(graph, nodes, clusters, source, FaultConfig{0.0}, gossip_rng);
        const auto depth = oracle::bfs_depth(graph.adjacency, source);
        if (trace.reached_at == depth) {
            ++exact;
        } else {
            o.note(fmt("topology %llu: reached_at differs from BFS depth", static_cast<unsigned long long>(t)));
        }
    }
    const double elapsed = seconds_since(start);
    o.require(exact == 50, fmt("%d / 50 topologies match BFS exactly (reached set and depth)", exact));
    o.require(elapsed < 30.0, fmt("runtime %.2f s (limit 30 s)", elapsed));
    return o;
}

std::string row_label(const RunResult& r)
{
    return fmt("%s lambda=%4.0f r_cls=%.1f p_fail=%.2f", std::string(to_string(r.config.mechanism.kind)).c_str(),
               r.config.topology.lambda, r.config.topology.r_cls, r.config.fault.p_fail);
}

Outcome fig2_shape(const Context& ctx)
{
    Outcome o;
    const auto start = Clock::now();
    const auto spec = fig2_spec();
    const auto results = sweep(spec, ctx.workers);
    const double elapsed = seconds_since(start);

    std::map<MechanismKind, std::vector<double>> R; // by lambda index
    for (const auto& r : results) {
        R[r.config.mechanism.kind].push_back(r.R_mean);
        o.note(fmt("%s  R = %.4f +- %.4f  failure rate %.3f", row_label(r).c_str(), r.R_mean, r.R_std,
                   r.failure_rate));
    }
    const auto& poc = R[MechanismKind::poc];
    const auto [lo, hi] = std::minmax_element(poc.begin(), poc.end());
    double mean = 0.0;
    bool defined = true;
    for (double v : poc) {
        mean += v;
        defined = defined && !std::isnan(v);
    }
    mean /= static_cast<double>(poc.size());
    const double spread = defined ? (*hi - *lo) / mean : std::nan("");
    o.require(defined && spread <= 0.05,
              fmt("PoC relative R spread (max - min) / mean over lambda 100..1000 = %.4f (limit 0.05)%s", spread,
                  defined ? "" : ", R undefined at some lambda"));

    const double pow = R[MechanismKind::pow].back();
    const double pos = R[MechanismKind::pos].back();
    const double poc_last = poc.back();
    o.require(poc_last > pos && pos > pow,
              fmt("at lambda = 1000: R(PoC) = %.4f > R(PoS) = %.4f > R(PoW) = %.4f", poc_last, pos, pow));

    const auto& pow_r = R[MechanismKind::pow];
    bool decreasing = true;
    for (std::size_t i = 1; i < pow_r.size(); ++i) {
        decreasing = decreasing && pow_r[i] < pow_r[i - 1];
    }
    o.require(decreasing, "PoW R strictly decreasing over lambda 100..1000");
    o.require(elapsed < 300.0, fmt("runtime %.1f s at %zu repetitions x %zu rounds (limit 300 s)", elapsed,
                                   spec.base.repetitions, spec.base.k_rounds));
    return o;
}

Outcome fig3_shape(const Context& ctx)
{
    Outcome o;
    const auto start = Clock::now();
    const auto spec = fig3_spec();
    const auto results = sweep(spec, ctx.workers);
    const double elapsed = seconds_since(start);
    const std::size_t grid = results.size() / fig3_series_count;

    for (const auto& r : results) {
        o.note(fmt("%s  G = %.4f +- %.4f", row_label(r).c_str(), r.G_mean, r.G_std));
    }
    const auto at = [&](std::size_t series, std::size_t p) -> const RunResult& { return results[series * grid + p]; };
    // Series order: PoW at r_cls 0.1, 0.3, 0.5; PoS; PoC. PoW at 0.5 shares
    // the baseline coverage of the other two.
    const std::size_t pow_base = 2, pos = 3, poc = 4;

    std::size_t ordered = 0;
    for (std::size_t p = 0; p < grid; ++p) {
        const double gw = at(pow_base, p).G_mean, gc = at(poc, p).G_mean, gs = at(pos, p).G_mean;
        if (gw < gc && gc < gs) {
            ++ordered;
        } else {
            o.note(fmt("p_fail = %.1f: G(PoW) = %.4f, G(PoC) = %.4f, G(PoS) = %.4f", at(0, p).config.fault.p_fail,
                       gw, gc, gs));
        }
    }
    o.require(ordered == grid, fmt("G(PoW) < G(PoC) < G(PoS) at %zu / %zu p_fail points", ordered, grid));

    for (std::size_t s = 0; s < fig3_series_count; ++s) {
        std::vector<double> p_fail, g;
        for (std::size_t p = 0; p < grid; ++p) {
            p_fail.push_back(at(s, p).config.fault.p_fail);
            g.push_back(at(s, p).G_mean);
        }
        const double rho = oracle::spearman(p_fail, g);
        o.require(rho < 0.0, fmt("Spearman(G, p_fail) for %s r_cls=%.1f = %+.3f (need < 0)",
                                 std::string(to_string(at(s, 0).config.mechanism.kind)).c_str(),
                                 at(s, 0).config.topology.r_cls, rho));
    }

    const std::size_t half = 5;
    double g_lo = 1.0, g_hi = 0.0, max_se = 0.0;
    for (std::size_t s = 0; s < 3; ++s) {
        const auto& r = at(s, half);
        g_lo = std::min(g_lo, r.G_mean);
        g_hi = std::max(g_hi, r.G_mean);
        max_se = std::max(max_se, r.G_std / std::sqrt(static_cast<double>(r.config.repetitions)));
    }
    o.require(g_hi - g_lo > 2.0 * max_se,
              fmt("PoW at p_fail = 0.5 across r_cls 0.1/0.3/0.5: max - min = %.4f, 2 x max SE = %.4f", g_hi - g_lo,
                  2.0 * max_se));
    o.require(elapsed < 300.0, fmt("runtime %.1f s (limit 300 s)", elapsed));
    return o;
}

struct Invocation {
    int status = -1;
    std::string output;
};

Invocation invoke(const Context& ctx, const std::string& args)
{
    Invocation r;
    FILE* pipe = popen((ctx.cli + " " + args + " 2>&1").c_str(), "r");
    if (!pipe) {
        return r;
    }
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
        r.output.append(buf, n);
    }
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism(const Context& ctx)
{
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / ("wirecons-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);

    std::ofstream(dir / "run.json") << R"({
  "topology": {"lambda": 400, "r_cls": 0.3},
  "fault": {"p_fail": 0.3},
  "mechanism": {"kind": "PoC", "n_w": 50, "r_sfl": 0.9, "delta_sfl": 1},
  "k_rounds": 100, "repetitions": 6, "seed": 11
})";
    std::ofstream(dir / "sweep.json") << R"({
  "base": {"topology": {"lambda": 300}, "k_rounds": 50, "repetitions": 4, "seed": 3},
  "axes": {"mechanism": ["PoW", "PoS", "PoC"], "p_fail": [0, 0.3, 0.6], "r_cls": [0.1, 0.5]}
})";

    const auto file_key = [](std::string name) {
        std::replace(name.begin(), name.end(), ' ', '_');
        return name;
    };
    const auto twice = [&](const std::string& name, const std::string& args_a, const std::string& args_b,
                           bool compare_stdout) {
        const auto a = invoke(ctx, args_a);
        const auto b = invoke(ctx, args_b);
        const auto fa = slurp(dir / (file_key(name) + "_a.csv"));
        const auto fb = slurp(dir / (file_key(name) + "_b.csv"));
        bool same = a.status == 0 && b.status == 0;
        if (compare_stdout) {
            same = same && a.output == b.output && !a.output.empty();
        } else {
            same = same && !fa.empty() && fa == fb;
        }
        o.require(same, name + ": two invocations byte-identical");
        if (a.status != 0) {
            o.note(a.output);
        }
    };
    const auto out = [&](const std::string& name, char which) {
        return " --out " + (dir / (file_key(name) + "_" + which + ".csv")).string();
    };
    const std::string run_cfg = " --config " + (dir / "run.json").string();
    const std::string sweep_cfg = " --config " + (dir / "sweep.json").string();
    const std::string preset = " --repetitions 2 --rounds 30";

    twice("run", "run" + run_cfg + out("run", 'a'), "run" + run_cfg + out("run", 'b'), false);
    twice("sweep", "sweep" + sweep_cfg + out("sweep", 'a'), "sweep" + sweep_cfg + out("sweep", 'b'), false);
    twice("sweep workers 1 vs 8", "sweep --workers 1" + sweep_cfg + out("sweep workers 1 vs 8", 'a'),
          "sweep --workers 8" + sweep_cfg + out("sweep workers 1 vs 8", 'b'), false);
    twice("run workers 1 vs 8", "run --workers 1" + run_cfg + out("run workers 1 vs 8", 'a'),
          "run --workers 8" + run_cfg + out("run workers 1 vs 8", 'b'), false);
    twice("fig2", "fig2" + preset + out("fig2", 'a'), "fig2" + preset + out("fig2", 'b'), false);
    twice("fig3", "fig3" + preset + out("fig3", 'a'), "fig3 --workers 8" + preset + out("fig3", 'b'), false);
    twice("gini", "gini --counts 3,1,4,1,5,9,2,6", "gini --counts 3,1,4,1,5,9,2,6", true);
    twice("usl", "usl --alpha 0.1 --beta 0.001 --n-max 200", "usl --alpha 0.1 --beta 0.001 --n-max 200", true);

    fs::remove_all(dir);
    return o;
}

Outcome shuffle_exactness(const Context&)
{
    Outcome o;
    ExperimentConfig config;
    config.mechanism.kind = MechanismKind::poc;
    config.mechanism.n_w = 50;
    config.mechanism.r_sfl = 0.9;
    config.topology.r_cls = 0.5;
    config.fault.p_fail = 0.3;
    config.k_rounds = 60;
    config.seed = 8;

    for (std::size_t delta : {0, 2}) {
        config.mechanism.delta_sfl = delta;
        std::vector<std::vector<NodeId>> sets;
        RepetitionObserver observer;
        observer.on_round = [&](const RoundOutcome& r) { sets.push_back(r.eligible); };
        run_repetition(config, 0, &observer);

        std::size_t good = 0, checked = 0;
        for (std::size_t r = 1; r < sets.size(); ++r) {
            std::vector<NodeId> kept;
            std::set_intersection(sets[r - 1].begin(), sets[r - 1].end(), sets[r].begin(), sets[r].end(),
                                  std::back_inserter(kept));
            const std::size_t replaced = sets[r - 1].size() - kept.size();
            const bool shuffle = r % (delta + 1) == 0;
            const std::size_t expected = shuffle ? 45 : 0;
            ++checked;
            if (sets[r].size() == 50 && replaced == expected) {
                ++good;
            } else {
                o.note(fmt("delta_sfl = %zu, round %zu: %zu witnesses replaced, expected %zu", delta, r, replaced,
                           expected));
            }
        }
        o.require(good == checked && checked + 1 == config.k_rounds,
                  fmt("delta_sfl = %zu: %zu / %zu round transitions replace exactly %s", delta, good, checked,
                      delta == 0 ? "45 witnesses" : "45 witnesses at shuffles and none between"));
    }
    return o;
}

Outcome usl_checks(const Context&)
{
    Outcome o;
    const double s1 = usl(1, {0.1, 0.001});
    o.require(s1 == 1.0, fmt("S(1) = %.17g", s1));
    bool linear = true;
    for (std::uint64_t n = 1; n <= 10000; ++n) {
        linear = linear && usl(n, {0.0, 0.0}) == static_cast<double>(n);
    }
    o.require(linear, "alpha = beta = 0: S(n) = n for n = 1..10000");
    std::uint64_t best = 1;
    for (std::uint64_t n = 2; n <= 10000; ++n) {
        if (usl(n, {0.1, 0.001}) > usl(best, {0.1, 0.001})) {
            best = n;
        }
    }
    o.require(best == 30, fmt("alpha = 0.1, beta = 0.001: exhaustive argmax over 1..10000 = %llu",
                              static_cast<unsigned long long>(best)));
    const auto library = usl_argmax(10000, {0.1, 0.001});
    o.require(library == 30, fmt("usl_argmax = %llu", static_cast<unsigned long long>(library)));
    return o;
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome(const Context&)> check;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria{
        {1, "gini matches the double-loop oracle", gini_oracle},
        {2, "gini analytic cases", gini_analytic},
        {3, "point process statistics", ppp_statistics},
        {4, "fault-free gossip equals BFS", gossip_bfs},
        {5, "throughput vs density preset shape", fig2_shape},
        {6, "decentralization vs failure rate preset shape", fig3_shape},
        {7, "determinism", determinism},
        {8, "witness shuffle exactness", shuffle_exactness},
        {9, "scalability law checks", usl_checks},
    };

    CLI::App app{"wirecons acceptance checks"};
    std::vector<int> selected;
    Context ctx;
    ctx.cli = WIRECONS_EXE;
    bool verbose = false;
    app.add_option("--criterion", selected, "Criterion numbers to run (default: all)")->check(CLI::Range(1, 9));
    app.add_option("--workers", ctx.workers, "Worker threads for the preset sweeps (0 = all cores)");
    app.add_option("--cli", ctx.cli, "Path to the wirecons executable");
    app.add_flag("--verbose,-v", verbose, "Print all detail lines, not only failures");
    CLI11_PARSE(app, argc, argv);

    bool all_pass = true;
    for (const auto& c : criteria) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
            continue;
        }
        const auto start = Clock::now();
        Outcome outcome;
        try {
            outcome = c.check(ctx);
        } catch (const std::exception& e) {
            outcome.require(false, std::string("exception: ") + e.what());
        }
        std::printf("criterion %d %s: %s (%.1f s)\n", c.id, outcome.pass ? "PASS" : "FAIL", c.name,
                    seconds_since(start));
        for (const auto& line : outcome.details) {
            if (verbose || !outcome.pass || line.rfind("ok", 0) == 0 || line.rfind("FAILED", 0) == 0) {
                std::printf("    %s\n", line.c_str());
            }
        }
        std::fflush(stdout);
        all_pass = all_pass && outcome.pass;
    }
    return all_pass ? 0 : 1;
}
