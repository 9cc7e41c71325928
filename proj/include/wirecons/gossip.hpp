// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "wirecons/random.hpp"
#include "wirecons/topology.hpp"

namespace wirecons {

struct FaultConfig {
    /// Probability that one delivery attempt to a receiver inside a cluster
    /// fails.
    double p_fail = 0.0;

    void validate() const;
};

struct FailedLink {
    NodeId sender = 0;
    NodeId receiver = 0;
    std::size_t round = 0;

    friend bool operator==(const FailedLink&, const FailedLink&) = default;
};

struct GossipTrace {
    NodeId source = 0;
    /// Round of first successful reception, empty if never reached.
    std::vector<std::optional<std::size_t>> reached_at;
    /// Lowest-id sender whose attempt succeeded; empty for the source and
    /// for unreached nodes.
    std::vector<std::optional<NodeId>> delivered_by;
    std::vector<FailedLink> failed_links;
    std::size_t rounds_executed = 0;

    std::size_t reached_count() const noexcept;

    friend bool operator==(const GossipTrace&, const GossipTrace&) = default;
};

struct PropagateOptions {
    bool record_failed_links = true;
};

/// Synchronous flooding from `source`.
///
/// In round k every holder attempts delivery to each neighbor that does not
/// yet hold the block. An attempt into a receiver inside a cluster fails with
/// probability p_fail, independently of the other attempts; the receiver is
/// reached if any attempt succeeds. A receiver that failed may be retried in
/// later rounds. Stops after the first round with no new deliveries.
///
/// Random draws are made receiver by receiver in ascending id, and for each
/// receiver sender by sender in ascending id. Only attempts into cluster
/// receivers with 0 < p_fail < 1 consume randomness.
GossipTrace propagate(const Graph& graph, const NodeSet& nodes, const ClusterSet& clusters,
                      NodeId source, const FaultConfig& fault, RandomStream& rng,
                      PropagateOptions options = {});

/// Same, with per-node cluster membership already evaluated.
GossipTrace propagate(const Graph& graph, std::span<const char> receiver_in_cluster,
                      NodeId source, const FaultConfig& fault, RandomStream& rng,
                      PropagateOptions options = {});

/// Number of nodes required for a quorum of `theta` over `eligible_count`
/// nodes, i.e. ceil(theta * eligible_count) with a small tolerance so that
/// theta = 2/3 over 3 nodes gives 2, not 3.
std::size_t quorum_size(double theta, std::size_t eligible_count);

/// Smallest round k by which at least quorum_size(theta, |eligible|) eligible
/// nodes hold the block, or nullopt if no round achieves it.
std::optional<std::size_t> rounds_to_quorum(const GossipTrace& trace,
                                            std::span<const NodeId> eligible, double theta);

/// `round,sender,receiver,outcome` rows, outcome in {delivered, failed},
/// ordered by round, then receiver, then sender.
void write_trace_csv(std::ostream& out, const GossipTrace& trace);

} // namespace wirecons
