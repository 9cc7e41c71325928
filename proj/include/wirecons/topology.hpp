// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "wirecons/random.hpp"

namespace wirecons {

/// Position in meters.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b) noexcept;

struct TopologyConfig {
    double field_side = 1.0;     // km
    double lambda = 400.0;       // expected nodes per km^2
    double comm_range = 100.0;   // m
    double r_cls = 0.0;          // target area fraction under failure clusters
    double cluster_side = 200.0; // m

    double field_side_m() const noexcept { return field_side * 1000.0; }

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
};

/// Node positions; the node id is the index.
struct NodeSet {
    std::vector<Point> positions;

    std::size_t size() const noexcept { return positions.size(); }
    bool empty() const noexcept { return positions.empty(); }

    friend bool operator==(const NodeSet&, const NodeSet&) = default;
};

using NodeId = std::size_t;

/// Undirected unit-disk graph with sorted adjacency lists.
struct Graph {
    std::vector<std::vector<NodeId>> adjacency;

    std::size_t size() const noexcept { return adjacency.size(); }
    const std::vector<NodeId>& neighbors(NodeId i) const { return adjacency.at(i); }
    std::size_t edge_count() const noexcept;

    friend bool operator==(const Graph&, const Graph&) = default;
};

/// Axis-aligned square, lower-left corner and side in meters.
struct ClusterBox {
    Point corner;
    double side = 0.0;

    bool contains(const Point& p) const noexcept;

    friend bool operator==(const ClusterBox&, const ClusterBox&) = default;
};

struct ClusterSet {
    std::vector<ClusterBox> boxes;
    double achieved_coverage = 0.0;

    friend bool operator==(const ClusterSet&, const ClusterSet&) = default;
};

/// Homogeneous Poisson point process on the field: the count is drawn first,
/// then the positions as (x, y) pairs in id order.
NodeSet sample_ppp(const TopologyConfig& config, RandomStream& rng);

/// Keep each node independently with probability q. Kept nodes are
/// renumbered densely in their original order.
NodeSet thin(const NodeSet& nodes, double q, RandomStream& rng);

/// Edge (i, j) iff distance(i, j) <= comm_range.
Graph build_graph(const NodeSet& nodes, double comm_range);

/// Drop uniformly placed square boxes until the clipped union covers at least
/// r_cls of the field. A box that would push coverage past r_cls + 0.05 is
/// rejected and another placement is drawn.
ClusterSet place_clusters(const TopologyConfig& config, RandomStream& rng);

/// Area of the union of the boxes clipped to [0, side_m]^2, in m^2.
/// Exact, by coordinate compression.
double union_area(const std::vector<ClusterBox>& boxes, double side_m);

bool in_cluster(const Point& p, const ClusterSet& clusters) noexcept;

/// Debug exports: `node_id,x_m,y_m` and `box_id,corner_x_m,corner_y_m,side_m`.
void write_nodes_csv(std::ostream& out, const NodeSet& nodes);
void write_clusters_csv(std::ostream& out, const ClusterSet& clusters);

} // namespace wirecons
