#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tbundle/error.hpp"

namespace tbundle {

using VertexId = std::int32_t;

/// Finite connected graph with unit-length edges and a strictly positive
/// vertex weight (the measure; counting measure by default). Immutable once
/// built. Vertex order is canonical: file input sorts labels lexicographically,
/// builders use their natural order.
class MetricGraph {
public:
    /// Empty placeholder; assign from a builder before use.
    MetricGraph() = default;

    /// Builds from labelled edges. Duplicate edges collapse; self-loops and
    /// disconnected inputs are rejected.
    static MetricGraph from_edges(const std::vector<std::pair<std::string, std::string>>& edges);

    /// Parses "u<TAB>v" lines (blank lines and #-comments skipped).
    static MetricGraph from_edge_file(const std::string& path);

    /// Path 0-1-...-(n-1).
    static MetricGraph path(int n);
    /// Cycle on n >= 3 vertices.
    static MetricGraph cycle(int n);

    /// Applies a "v<TAB>weight" measure file; absent vertices keep weight 1.
    void load_measure_file(const std::string& path);
    void set_weight(VertexId v, double w);

    VertexId vertex_count() const { return static_cast<VertexId>(labels_.size()); }
    std::int64_t edge_count() const { return static_cast<std::int64_t>(edge_u_.size()); }

    const std::string& label(VertexId v) const { return labels_[static_cast<std::size_t>(v)]; }
    VertexId id_of(const std::string& label) const;
    bool has_label(const std::string& label) const { return ids_.count(label) != 0; }

    double weight(VertexId v) const { return weights_[static_cast<std::size_t>(v)]; }
    double total_weight() const;

    /// Neighbors of v, sorted ascending.
    const VertexId* neighbors_begin(VertexId v) const { return adj_.data() + offsets_[static_cast<std::size_t>(v)]; }
    const VertexId* neighbors_end(VertexId v) const { return adj_.data() + offsets_[static_cast<std::size_t>(v) + 1]; }
    int degree(VertexId v) const {
        return static_cast<int>(offsets_[static_cast<std::size_t>(v) + 1] - offsets_[static_cast<std::size_t>(v)]);
    }

    /// Edge list as (u, v) with u < v, sorted.
    const std::vector<VertexId>& edge_u() const { return edge_u_; }
    const std::vector<VertexId>& edge_v() const { return edge_v_; }

    bool is_tree() const { return edge_count() == vertex_count() - 1; }

    /// Fills out[v] = d(source, v); out resized to vertex_count().
    void bfs_row(VertexId source, std::vector<std::int32_t>& out) const;

    /// Sum of weights over B(source, radius).
    double ball_weight(VertexId source, std::int32_t radius) const;

    std::int32_t eccentricity(VertexId source) const;

private:
    void finalize(std::vector<std::pair<VertexId, VertexId>> edges);

    std::vector<std::string> labels_;
    std::unordered_map<std::string, VertexId> ids_;
    std::vector<double> weights_;
    std::vector<std::size_t> offsets_;
    std::vector<VertexId> adj_;
    std::vector<VertexId> edge_u_, edge_v_;

    friend class FreeBall;
};

}  // namespace tbundle
