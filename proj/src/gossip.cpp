// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

#include "wirecons/gossip.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <tuple>

#include "wirecons/error.hpp"

namespace wirecons {

void FaultConfig::validate() const
{
    if (!(p_fail >= 0.0 && p_fail <= 1.0)) {
        throw ConfigError("p_fail", "must lie in [0, 1]");
    }
}

std::size_t GossipTrace::reached_count() const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(reached_at.begin(), reached_at.end(), [](const auto& r) { return r.has_value(); }));
}

GossipTrace propagate(const Graph& graph, const NodeSet& nodes, const ClusterSet& clusters,
                      NodeId source, const FaultConfig& fault, RandomStream& rng,
                      PropagateOptions options)
{
    if (nodes.size() != graph.size()) {
        throw ArgumentError("propagate: graph and node set disagree on node count");
    }
    std::vector<char> inside(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        inside[i] = in_cluster(nodes.positions[i], clusters) ? 1 : 0;
    }
    return propagate(graph, inside, source, fault, rng, options);
}

GossipTrace propagate(const Graph& graph, std::span<const char> receiver_in_cluster,
                      NodeId source, const FaultConfig& fault, RandomStream& rng,
                      PropagateOptions options)
{
    const std::size_t n = graph.size();
    if (source >= n) {
        throw ArgumentError("propagate: source id " + std::to_string(source) + " out of range");
    }
    if (receiver_in_cluster.size() != n) {
        throw ArgumentError("propagate: cluster membership size mismatch");
    }
    fault.validate();

    GossipTrace trace;
    trace.source = source;
    trace.reached_at.assign(n, std::nullopt);
    trace.delivered_by.assign(n, std::nullopt);
    trace.reached_at[source] = 0;

    // Unreached nodes with at least one holder neighbor.
    std::vector<char> is_candidate(n, 0);
    std::vector<NodeId> candidates;
    auto enqueue_neighbors = [&](NodeId u) {
        for (NodeId v : graph.adjacency[u]) {
            if (!trace.reached_at[v] && !is_candidate[v]) {
                is_candidate[v] = 1;
                candidates.push_back(v);
            }
        }
    };
    enqueue_neighbors(source);

    std::vector<NodeId> delivered;
    std::vector<NodeId> still_pending;
    for (std::size_t round = 1; !candidates.empty(); ++round) {
        std::sort(candidates.begin(), candidates.end());
        delivered.clear();
        still_pending.clear();

        for (NodeId v : candidates) {
            const bool fault_prone = receiver_in_cluster[v] != 0 && fault.p_fail > 0.0;
            std::optional<NodeId> winner;
            for (NodeId u : graph.adjacency[v]) {
                const auto& r = trace.reached_at[u];
                if (!r || *r >= round) {
                    continue;
                }
                if (!fault_prone) {
                    winner = u;
                    break;
                }
                if (rng.bernoulli(fault.p_fail)) {
                    if (options.record_failed_links) {
                        trace.failed_links.push_back({u, v, round});
                    }
                } else if (!winner) {
                    winner = u;
                }
            }
            if (winner) {
                trace.reached_at[v] = round;
                trace.delivered_by[v] = winner;
                delivered.push_back(v);
            } else {
                still_pending.push_back(v);
            }
        }

        trace.rounds_executed = round;
        if (delivered.empty()) {
            break;
        }
        for (NodeId v : delivered) {
            is_candidate[v] = 0;
        }
        candidates.swap(still_pending);
        for (NodeId v : delivered) {
            enqueue_neighbors(v);
        }
    }
    return trace;
}

std::size_t quorum_size(double theta, std::size_t eligible_count)
{
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw ArgumentError("quorum_size: theta must lie in (0, 1]");
    }
    const double target = theta * static_cast<double>(eligible_count);
    const auto needed = static_cast<std::size_t>(std::ceil(target - 1e-9));
    return std::max<std::size_t>(needed, 1);
}

std::optional<std::size_t> rounds_to_quorum(const GossipTrace& trace,
                                            std::span<const NodeId> eligible, double theta)
{
    if (eligible.empty()) {
        throw ArgumentError("rounds_to_quorum: eligible set is empty");
    }
    const std::size_t needed = quorum_size(theta, eligible.size());

    std::vector<std::size_t> rounds;
    rounds.reserve(eligible.size());
    for (NodeId v : eligible) {
        if (v >= trace.reached_at.size()) {
            throw ArgumentError("rounds_to_quorum: eligible id " + std::to_string(v) + " out of range");
        }
        if (const auto& r = trace.reached_at[v]) {
            rounds.push_back(*r);
        }
    }
    if (rounds.size() < needed) {
        return std::nullopt;
    }
    std::nth_element(rounds.begin(), rounds.begin() + static_cast<std::ptrdiff_t>(needed - 1), rounds.end());
    return rounds[needed - 1];
}

void write_trace_csv(std::ostream& out, const GossipTrace& trace)
{
    struct Row {
        std::size_t round;
        NodeId receiver;
        NodeId sender;
        bool delivered;
    };
    std::vector<Row> rows;
    rows.reserve(trace.failed_links.size() + trace.reached_at.size());
    for (const auto& f : trace.failed_links) {
        rows.push_back({f.round, f.receiver, f.sender, false});
    }
    for (NodeId v = 0; v < trace.reached_at.size(); ++v) {
        if (trace.delivered_by[v]) {
            rows.push_back({*trace.reached_at[v], v, *trace.delivered_by[v], true});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.round, a.receiver, a.sender) < std::tie(b.round, b.receiver, b.sender);
    });

    out << "round,sender,receiver,outcome\n";
    for (const auto& r : rows) {
        out << r.round << ',' << r.sender << ',' << r.receiver << ',' << (r.delivered ? "delivered" : "failed")
            << '\n';
    }
}

} // namespace wirecons
