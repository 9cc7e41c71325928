// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

#include "wirecons/topology.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "wirecons/error.hpp"

namespace wirecons {

double distance(const Point& a, const Point& b) noexcept
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

void TopologyConfig::validate() const
{
    if (!(field_side > 0.0) || !std::isfinite(field_side)) {
        throw ConfigError("field_side", "must be positive");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ConfigError("lambda", "must be non-negative");
    }
    if (!(comm_range > 0.0) || !std::isfinite(comm_range)) {
        throw ConfigError("comm_range", "must be positive");
    }
    if (!(r_cls >= 0.0 && r_cls <= 1.0)) {
        throw ConfigError("r_cls", "must lie in [0, 1]");
    }
    if (!(cluster_side > 0.0 && cluster_side <= field_side_m())) {
        throw ConfigError("cluster_side", "must lie in (0, field_side * 1000]");
    }
}

std::size_t Graph::edge_count() const noexcept
{
    std::size_t degree_sum = 0;
    for (const auto& adj : adjacency) {
        degree_sum += adj.size();
    }
    return degree_sum / 2;
}

bool ClusterBox::contains(const Point& p) const noexcept
{
    return p.x >= corner.x && p.x <= corner.x + side && p.y >= corner.y && p.y <= corner.y + side;
}

NodeSet sample_ppp(const TopologyConfig& config, RandomStream& rng)
{
    config.validate();
    const double side_m = config.field_side_m();
    const double mean = config.lambda * config.field_side * config.field_side;

    NodeSet nodes;
    const auto count = rng.poisson(mean);
    nodes.positions.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double x = rng.uniform(0.0, side_m);
        const double y = rng.uniform(0.0, side_m);
        nodes.positions.push_back({x, y});
    }
    return nodes;
}

NodeSet thin(const NodeSet& nodes, double q, RandomStream& rng)
{
    if (!(q >= 0.0 && q <= 1.0)) {
        throw ArgumentError("thin: retention probability must lie in [0, 1]");
    }
    NodeSet kept;
    for (const auto& p : nodes.positions) {
        if (rng.bernoulli(q)) {
            kept.positions.push_back(p);
        }
    }
    return kept;
}

Graph build_graph(const NodeSet& nodes, double comm_range)
{
    if (!(comm_range > 0.0)) {
        throw ArgumentError("build_graph: comm_range must be positive");
    }
    const std::size_t n = nodes.size();
    Graph graph;
    graph.adjacency.resize(n);
    if (n == 0) {
        return graph;
    }

    // Bucket nodes into square cells of side comm_range; neighbors can only
    // live in the 3x3 block of cells around a node.
    double min_x = nodes.positions[0].x, min_y = nodes.positions[0].y;
    double max_x = min_x, max_y = min_y;
    for (const auto& p : nodes.positions) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    const auto cells_x = static_cast<std::size_t>(std::floor((max_x - min_x) / comm_range)) + 1;
    const auto cells_y = static_cast<std::size_t>(std::floor((max_y - min_y) / comm_range)) + 1;
    auto cell_of = [&](const Point& p) {
        const auto cx = std::min(cells_x - 1, static_cast<std::size_t>((p.x - min_x) / comm_range));
        const auto cy = std::min(cells_y - 1, static_cast<std::size_t>((p.y - min_y) / comm_range));
        return std::pair{cx, cy};
    };

    std::vector<std::vector<NodeId>> cells(cells_x * cells_y);
    for (NodeId i = 0; i < n; ++i) {
        const auto [cx, cy] = cell_of(nodes.positions[i]);
        cells[cy * cells_x + cx].push_back(i);
    }

    const double range_sq = comm_range * comm_range;
    for (NodeId i = 0; i < n; ++i) {
        const Point& p = nodes.positions[i];
        const auto [cx, cy] = cell_of(p);
        auto& adj = graph.adjacency[i];
        for (std::size_t gy = (cy == 0 ? 0 : cy - 1); gy <= std::min(cells_y - 1, cy + 1); ++gy) {
            for (std::size_t gx = (cx == 0 ? 0 : cx - 1); gx <= std::min(cells_x - 1, cx + 1); ++gx) {
                for (NodeId j : cells[gy * cells_x + gx]) {
                    if (j == i) {
                        continue;
                    }
                    const double dx = p.x - nodes.positions[j].x;
                    const double dy = p.y - nodes.positions[j].y;
                    if (dx * dx + dy * dy <= range_sq) {
                        adj.push_back(j);
                    }
                }
            }
        }
        std::sort(adj.begin(), adj.end());
    }
    return graph;
}

double union_area(const std::vector<ClusterBox>& boxes, double side_m)
{
    std::vector<double> xs{0.0, side_m};
    std::vector<double> ys{0.0, side_m};
    for (const auto& b : boxes) {
        xs.push_back(std::clamp(b.corner.x, 0.0, side_m));
        xs.push_back(std::clamp(b.corner.x + b.side, 0.0, side_m));
        ys.push_back(std::clamp(b.corner.y, 0.0, side_m));
        ys.push_back(std::clamp(b.corner.y + b.side, 0.0, side_m));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    const std::size_t nx = xs.size() - 1;
    const std::size_t ny = ys.size() - 1;
    std::vector<char> covered(nx * ny, 0);
    for (const auto& b : boxes) {
        const double x0 = std::clamp(b.corner.x, 0.0, side_m);
        const double x1 = std::clamp(b.corner.x + b.side, 0.0, side_m);
        const double y0 = std::clamp(b.corner.y, 0.0, side_m);
        const double y1 = std::clamp(b.corner.y + b.side, 0.0, side_m);
        const auto ix0 = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), x0) - xs.begin());
        const auto ix1 = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), x1) - xs.begin());
        const auto iy0 = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), y0) - ys.begin());
        const auto iy1 = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), y1) - ys.begin());
        for (std::size_t iy = iy0; iy < iy1; ++iy) {
            for (std::size_t ix = ix0; ix < ix1; ++ix) {
                covered[iy * nx + ix] = 1;
            }
        }
    }

    double area = 0.0;
    for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            if (covered[iy * nx + ix]) {
                area += (xs[ix + 1] - xs[ix]) * (ys[iy + 1] - ys[iy]);
            }
        }
    }
    return area;
}

ClusterSet place_clusters(const TopologyConfig& config, RandomStream& rng)
{
    config.validate();
    ClusterSet clusters;
    if (config.r_cls <= 0.0) {
        return clusters;
    }

    const double side_m = config.field_side_m();
    const double field_area = side_m * side_m;
    const double s = config.cluster_side;
    const double upper = config.r_cls + 0.05;
    // Consecutive rejections tolerated before an overshooting box is kept.
    constexpr int max_rejections = 1000;
    // Bound on boxes for targets the clipped union can only approach.
    constexpr std::size_t max_boxes = 20000;

    int rejections = 0;
    while (clusters.achieved_coverage < config.r_cls && clusters.boxes.size() < max_boxes) {
        // Corners range over [-s, side_m) so every field point is equally
        // likely to fall under a single box.
        const ClusterBox box{{rng.uniform(-s, side_m), rng.uniform(-s, side_m)}, s};
        clusters.boxes.push_back(box);
        const double coverage = union_area(clusters.boxes, side_m) / field_area;
        if (coverage > upper && rejections < max_rejections) {
            clusters.boxes.pop_back();
            ++rejections;
            continue;
        }
        rejections = 0;
        clusters.achieved_coverage = coverage;
    }
    return clusters;
}

bool in_cluster(const Point& p, const ClusterSet& clusters) noexcept
{
    return std::any_of(clusters.boxes.begin(), clusters.boxes.end(),
                       [&](const ClusterBox& b) { return b.contains(p); });
}

void write_nodes_csv(std::ostream& out, const NodeSet& nodes)
{
    out << "node_id,x_m,y_m\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out << i << ',' << nodes.positions[i].x << ',' << nodes.positions[i].y << '\n';
    }
}

void write_clusters_csv(std::ostream& out, const ClusterSet& clusters)
{
    out << "box_id,corner_x_m,corner_y_m,side_m\n";
    for (std::size_t i = 0; i < clusters.boxes.size(); ++i) {
        const auto& b = clusters.boxes[i];
        out << i << ',' << b.corner.x << ',' << b.corner.y << ',' << b.side << '\n';
    }
}

} // namespace wirecons
