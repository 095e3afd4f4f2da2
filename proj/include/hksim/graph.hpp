#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hksim {

using node_id = std::uint32_t;

/// Raised when a graph violates one of its structural invariants.
class graph_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Edge {
    node_id u;
    node_id v;
    double w;
};

struct Neighbor {
    node_id node;
    double weight;
    std::size_t edge;  // index into WeightedGraph::edges()
};

/// Immutable simple undirected weighted graph with dense node ids 0..N-1.
///
/// Every edge is stored once with u < v; adjacency is a CSR view holding both
/// directions. Optional per-node community ids and external labels (the ids a
/// loader saw in its input) ride along with the topology.
class WeightedGraph {
public:
    WeightedGraph() = default;

    /// Validates and builds. Throws graph_error on self-loops, duplicate
    /// undirected edges, out-of-range endpoints or non-positive/non-finite
    /// weights.
    WeightedGraph(std::size_t node_count, std::vector<Edge> edges);

    [[nodiscard]] std::size_t node_count() const noexcept { return node_count_; }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
    [[nodiscard]] bool empty() const noexcept { return node_count_ == 0; }

    [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }
    [[nodiscard]] std::span<const Neighbor> neighbors(node_id i) const noexcept {
        return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
    }
    [[nodiscard]] std::size_t degree(node_id i) const noexcept { return offsets_[i + 1] - offsets_[i]; }
    [[nodiscard]] double strength(node_id i) const noexcept { return strength_[i]; }

    /// Index of edge {u,v} in edges(), if present.
    [[nodiscard]] std::optional<std::size_t> find_edge(node_id u, node_id v) const;

    [[nodiscard]] bool has_communities() const noexcept { return !communities_.empty(); }
    [[nodiscard]] std::span<const std::int64_t> communities() const noexcept { return communities_; }

    /// External id of each node. Identity unless set by a loader or subgraph.
    [[nodiscard]] std::int64_t label(node_id i) const noexcept {
        return labels_.empty() ? static_cast<std::int64_t>(i) : labels_[i];
    }
    [[nodiscard]] bool has_labels() const noexcept { return !labels_.empty(); }

    [[nodiscard]] WeightedGraph with_communities(std::vector<std::int64_t> communities) const;
    [[nodiscard]] WeightedGraph without_communities() const;
    [[nodiscard]] WeightedGraph with_labels(std::vector<std::int64_t> labels) const;
    /// Same topology, new weights given in edges() order.
    [[nodiscard]] WeightedGraph with_weights(std::span<const double> weights) const;

    /// Graphs are equal when node count, edges (in order), weights,
    /// communities and labels all match exactly.
    friend bool operator==(const WeightedGraph& a, const WeightedGraph& b);

private:
    void build_adjacency();

    std::size_t node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adjacency_;
    std::vector<double> strength_;
    std::vector<std::int64_t> communities_;
    std::vector<std::int64_t> labels_;
};

/// Subgraph on the given edge indices; nodes without a kept edge are dropped
/// and the survivors renumbered in ascending order. Labels and communities are
/// carried over.
WeightedGraph edge_subgraph(const WeightedGraph& g, std::span<const std::size_t> edge_indices);

}  // namespace hksim
