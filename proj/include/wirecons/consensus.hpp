// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wirecons/gossip.hpp"
#include "wirecons/metrics.hpp"
#include "wirecons/random.hpp"
#include "wirecons/topology.hpp"

namespace wirecons {

enum class MechanismKind { pow, pos, poc };

/// "PoW", "PoS", "PoC".
std::string_view to_string(MechanismKind kind) noexcept;

/// Accepts the canonical names case-insensitively; nullopt otherwise.
std::optional<MechanismKind> parse_mechanism(std::string_view name) noexcept;

struct ConsensusMechanismConfig {
    MechanismKind kind = MechanismKind::pow;
    double r_v = 0.2;           // PoS: validator probability
    std::size_t n_w = 50;       // PoC: witness count
    double r_sfl = 0.9;         // PoC: fraction of witnesses replaced per shuffle
    std::size_t delta_sfl = 0;  // PoC: rounds between shuffles

    /// Checks the fields that matter for `kind`.
    void validate() const;
};

struct LatencyConfig {
    double tau_round = 0.1; // s per gossip round
    double c_agg = 0.01;    // s per eligible participant
    double c_mech_pow = 1.0;
    double c_mech_pos = 0.2;
    double c_mech_poc = 0.2;
    double theta = 2.0 / 3.0;

    double c_mech(MechanismKind kind) const noexcept;
    void validate() const;
};

struct MechanismState {
    std::vector<NodeId> validator_set; // sorted
    std::vector<NodeId> witness_set;   // sorted
    std::size_t round_index = 0;
};

struct RoundOutcome {
    std::size_t round_index = 0;
    std::optional<NodeId> leader;
    std::vector<NodeId> eligible;
    std::vector<NodeId> participants;
    /// Rounds to quorum, when reached.
    std::optional<std::size_t> quorum_round;
    double t_c = 0.0;
    bool success = false;
};

/// The fixed part of a simulation: topology, its graph, the failure
/// clusters, and which nodes sit inside them.
struct World {
    NodeSet nodes;
    Graph graph;
    ClusterSet clusters;
    std::vector<char> node_in_cluster;

    World() = default;
    World(NodeSet nodes, Graph graph, ClusterSet clusters);
};

MechanismState init_mechanism(const ConsensusMechanismConfig& config, const NodeSet& nodes,
                              RandomStream& rng);

std::vector<NodeId> eligible_participants(const MechanismState& state,
                                          const ConsensusMechanismConfig& config, const NodeSet& nodes);

/// Number of witnesses a single shuffle replaces, ceil(r_sfl * n_w).
std::size_t shuffle_count(const ConsensusMechanismConfig& config);

/// Whether the round about to run at `round_index` starts with a shuffle.
/// Shuffles happen before rounds delta_sfl+1, 2(delta_sfl+1), ...
bool shuffle_due(const ConsensusMechanismConfig& config, std::size_t round_index) noexcept;

/// Replace shuffle_count() uniformly chosen witnesses with uniformly chosen
/// non-witnesses, limited by the size of the non-witness pool.
MechanismState shuffle_witnesses(const MechanismState& state, const ConsensusMechanismConfig& config,
                                 const NodeSet& nodes, RandomStream& rng);

/// Uniform draw. Throws RoundSkipError on an empty candidate set.
NodeId select_leader(std::span<const NodeId> candidates, RandomStream& rng);

/// Draws a round's random streams. Each role gets its own stream so that,
/// for example, a shuffle never shifts the gossip draws.
struct RoundStreams {
    RandomStream shuffle;
    RandomStream leader;
    RandomStream gossip;
};

/// One consensus round: shuffle if due, pick a leader among the eligible
/// nodes, gossip the block, find the quorum round H, then
/// t_c = H tau_round + c_agg |eligible| + c_mech. On success every
/// participant's ledger count is incremented. The ledger's
/// rounds_observed advances either way. If `trace_out` is given, the gossip
/// trace is stored there with failed links recorded.
RoundOutcome run_consensus_round(const World& world, MechanismState& state,
                                 const ConsensusMechanismConfig& config, const LatencyConfig& latency,
                                 const FaultConfig& fault, RoundStreams& streams,
                                 ParticipationLedger& ledger, GossipTrace* trace_out = nullptr);

/// `round,mechanism,leader,n_eligible,n_participants,success,t_c_seconds`
void write_rounds_header(std::ostream& out);
void write_round_row(std::ostream& out, const RoundOutcome& outcome, MechanismKind kind);

} // namespace wirecons
