// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

#include "wirecons/consensus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "wirecons/error.hpp"

namespace wirecons {

std::string_view to_string(MechanismKind kind) noexcept
{
    switch (kind) {
    case MechanismKind::pow:
        return "PoW";
    case MechanismKind::pos:
        return "PoS";
    case MechanismKind::poc:
        return "PoC";
    }
    return "?";
}

std::optional<MechanismKind> parse_mechanism(std::string_view name) noexcept
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "pow") {
        return MechanismKind::pow;
    }
    if (lower == "pos") {
        return MechanismKind::pos;
    }
    if (lower == "poc") {
        return MechanismKind::poc;
    }
    return std::nullopt;
}

void ConsensusMechanismConfig::validate() const
{
    switch (kind) {
    case MechanismKind::pow:
        break;
    case MechanismKind::pos:
        if (!(r_v >= 0.0 && r_v <= 1.0)) {
            throw ConfigError("r_v", "must lie in [0, 1]");
        }
        break;
    case MechanismKind::poc:
        if (n_w < 1) {
            throw ConfigError("n_w", "must be a positive integer");
        }
        if (!(r_sfl >= 0.0 && r_sfl <= 1.0)) {
            throw ConfigError("r_sfl", "must lie in [0, 1]");
        }
        break;
    }
}

double LatencyConfig::c_mech(MechanismKind kind) const noexcept
{
    switch (kind) {
    case MechanismKind::pow:
        return c_mech_pow;
    case MechanismKind::pos:
        return c_mech_pos;
    case MechanismKind::poc:
        return c_mech_poc;
    }
    return 0.0;
}

void LatencyConfig::validate() const
{
    auto non_negative = [](double v, const char* field) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ConfigError(field, "must be non-negative");
        }
    };
    non_negative(tau_round, "tau_round");
    non_negative(c_agg, "c_agg");
    non_negative(c_mech_pow, "c_mech.PoW");
    non_negative(c_mech_pos, "c_mech.PoS");
    non_negative(c_mech_poc, "c_mech.PoC");
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw ConfigError("theta", "must lie in (0, 1]");
    }
}

World::World(NodeSet nodes_in, Graph graph_in, ClusterSet clusters_in)
    : nodes(std::move(nodes_in)), graph(std::move(graph_in)), clusters(std::move(clusters_in))
{
    if (nodes.size() != graph.size()) {
        throw ArgumentError("World: graph and node set disagree on node count");
    }
    node_in_cluster.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        node_in_cluster[i] = in_cluster(nodes.positions[i], clusters) ? 1 : 0;
    }
}

MechanismState init_mechanism(const ConsensusMechanismConfig& config, const NodeSet& nodes,
                              RandomStream& rng)
{
    config.validate();
    const std::size_t n = nodes.size();
    MechanismState state;
    switch (config.kind) {
    case MechanismKind::pow:
        break;
    case MechanismKind::pos:
        for (NodeId i = 0; i < n; ++i) {
            if (rng.bernoulli(config.r_v)) {
                state.validator_set.push_back(i);
            }
        }
        break;
    case MechanismKind::poc:
        if (config.n_w > n) {
            throw ConfigError("n_w", "witness count " + std::to_string(config.n_w) + " exceeds node count " +
                                         std::to_string(n));
        }
        state.witness_set = rng.sample_without_replacement(n, config.n_w);
        std::sort(state.witness_set.begin(), state.witness_set.end());
        break;
    }
    return state;
}

std::vector<NodeId> eligible_participants(const MechanismState& state,
                                          const ConsensusMechanismConfig& config, const NodeSet& nodes)
{
    switch (config.kind) {
    case MechanismKind::pow: {
        std::vector<NodeId> all(nodes.size());
        std::iota(all.begin(), all.end(), NodeId{0});
        return all;
    }
    case MechanismKind::pos:
        return state.validator_set;
    case MechanismKind::poc:
        return state.witness_set;
    }
    return {};
}

std::size_t shuffle_count(const ConsensusMechanismConfig& config)
{
    const double raw = config.r_sfl * static_cast<double>(config.n_w);
    return static_cast<std::size_t>(std::ceil(raw - 1e-9));
}

bool shuffle_due(const ConsensusMechanismConfig& config, std::size_t round_index) noexcept
{
    if (config.kind != MechanismKind::poc || round_index == 0) {
        return false;
    }
    return round_index % (config.delta_sfl + 1) == 0;
}

MechanismState shuffle_witnesses(const MechanismState& state, const ConsensusMechanismConfig& config,
                                 const NodeSet& nodes, RandomStream& rng)
{
    if (config.kind != MechanismKind::poc) {
        throw ArgumentError("shuffle_witnesses: mechanism is not PoC");
    }
    const std::size_t n = nodes.size();
    const auto& current = state.witness_set;

    std::vector<char> is_witness(n, 0);
    for (NodeId w : current) {
        is_witness.at(w) = 1;
    }
    std::vector<NodeId> pool;
    pool.reserve(n - current.size());
    for (NodeId i = 0; i < n; ++i) {
        if (!is_witness[i]) {
            pool.push_back(i);
        }
    }

    const std::size_t replace = std::min({shuffle_count(config), current.size(), pool.size()});
    const auto leaving = rng.sample_without_replacement(current.size(), replace);
    const auto joining = rng.sample_without_replacement(pool.size(), replace);

    MechanismState next = state;
    for (std::size_t i = 0; i < replace; ++i) {
        next.witness_set[leaving[i]] = pool[joining[i]];
    }
    std::sort(next.witness_set.begin(), next.witness_set.end());
    return next;
}

NodeId select_leader(std::span<const NodeId> candidates, RandomStream& rng)
{
    if (candidates.empty()) {
        throw RoundSkipError("select_leader: no candidates");
    }
    return candidates[rng.uniform_index(candidates.size())];
}

RoundOutcome run_consensus_round(const World& world, MechanismState& state,
                                 const ConsensusMechanismConfig& config, const LatencyConfig& latency,
                                 const FaultConfig& fault, RoundStreams& streams,
                                 ParticipationLedger& ledger, GossipTrace* trace_out)
{
    if (ledger.size() != world.nodes.size()) {
        throw ArgumentError("run_consensus_round: ledger size does not match node count");
    }

    RoundOutcome outcome;
    outcome.round_index = state.round_index;

    if (shuffle_due(config, state.round_index)) {
        state = shuffle_witnesses(state, config, world.nodes, streams.shuffle);
    }
    outcome.eligible = eligible_participants(state, config, world.nodes);

    ++ledger.rounds_observed;
    ++state.round_index;

    NodeId leader = 0;
    try {
        leader = select_leader(outcome.eligible, streams.leader);
    } catch (const RoundSkipError&) {
        return outcome;
    }
    outcome.leader = leader;

    const auto trace = propagate(world.graph, world.node_in_cluster, leader, fault, streams.gossip,
                                 PropagateOptions{.record_failed_links = trace_out != nullptr});
    if (trace_out != nullptr) {
        *trace_out = trace;
    }
    const auto quorum = rounds_to_quorum(trace, outcome.eligible, latency.theta);
    if (!quorum) {
        return outcome;
    }

    outcome.quorum_round = quorum;
    outcome.success = true;
    for (NodeId v : outcome.eligible) {
        const auto& r = trace.reached_at[v];
        if (r && *r <= *quorum) {
            outcome.participants.push_back(v);
            ++ledger.counts[v];
        }
    }
    outcome.t_c = static_cast<double>(*quorum) * latency.tau_round +
                  latency.c_agg * static_cast<double>(outcome.eligible.size()) + latency.c_mech(config.kind);
    return outcome;
}

void write_rounds_header(std::ostream& out)
{
    out << "round,mechanism,leader,n_eligible,n_participants,success,t_c_seconds\n";
}

void write_round_row(std::ostream& out, const RoundOutcome& outcome, MechanismKind kind)
{
    char t_c[32];
    std::snprintf(t_c, sizeof t_c, "%.6g", outcome.t_c);
    out << outcome.round_index << ',' << to_string(kind) << ',';
    if (outcome.leader) {
        out << *outcome.leader;
    }
    out << ',' << outcome.eligible.size() << ',' << outcome.participants.size() << ','
        << (outcome.success ? "true" : "false") << ',' << t_c << '\n';
}

} // namespace wirecons
