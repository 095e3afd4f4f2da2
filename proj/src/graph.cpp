#include "hksim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <utility>

namespace hksim {

namespace {

std::uint64_t pair_key(node_id a, node_id b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

WeightedGraph::WeightedGraph(std::size_t node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges_.size() * 2);
    for (auto& e : edges_) {
        if (e.u >= node_count_ || e.v >= node_count_) {
            throw graph_error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                              ") references a node outside 0.." + std::to_string(node_count_ - 1));
        }
        if (e.u == e.v) throw graph_error("self-loop on node " + std::to_string(e.u));
        if (!std::isfinite(e.w) || e.w <= 0.0) {
            throw graph_error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                              ") has non-positive or non-finite weight");
        }
        if (e.u > e.v) std::swap(e.u, e.v);
        if (!seen.insert(pair_key(e.u, e.v)).second) {
            throw graph_error("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
        }
    }
    build_adjacency();
}

void WeightedGraph::build_adjacency() {
    offsets_.assign(node_count_ + 1, 0);
    for (const auto& e : edges_) {
        ++offsets_[e.u + 1];
        ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < node_count_; ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.resize(offsets_.back());
    strength_.assign(node_count_, 0.0);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const auto& e = edges_[k];
        adjacency_[cursor[e.u]++] = {e.v, e.w, k};
        adjacency_[cursor[e.v]++] = {e.u, e.w, k};
    }
    // Sorted neighbor lists make iteration order independent of edge order.
    for (std::size_t i = 0; i < node_count_; ++i) {
        auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
        auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
        std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
        double s = 0.0;
        for (auto it = first; it != last; ++it) s += it->weight;
        strength_[i] = s;
    }
}

std::optional<std::size_t> WeightedGraph::find_edge(node_id u, node_id v) const {
    if (u >= node_count_ || v >= node_count_) return std::nullopt;
    auto nbrs = neighbors(u);
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                               [](const Neighbor& n, node_id x) { return n.node < x; });
    if (it == nbrs.end() || it->node != v) return std::nullopt;
    return it->edge;
}

WeightedGraph WeightedGraph::with_communities(std::vector<std::int64_t> communities) const {
    if (communities.size() != node_count_) {
        throw graph_error("community vector has " + std::to_string(communities.size()) +
                          " entries for " + std::to_string(node_count_) + " nodes");
    }
    WeightedGraph g = *this;
    g.communities_ = std::move(communities);
    return g;
}

WeightedGraph WeightedGraph::without_communities() const {
    WeightedGraph g = *this;
    g.communities_.clear();
    return g;
}

WeightedGraph WeightedGraph::with_labels(std::vector<std::int64_t> labels) const {
    if (labels.size() != node_count_) {
        throw graph_error("label vector has " + std::to_string(labels.size()) + " entries for " +
                          std::to_string(node_count_) + " nodes");
    }
    WeightedGraph g = *this;
    g.labels_ = std::move(labels);
    return g;
}

WeightedGraph WeightedGraph::with_weights(std::span<const double> weights) const {
    if (weights.size() != edges_.size()) {
        throw graph_error("weight vector has " + std::to_string(weights.size()) + " entries for " +
                          std::to_string(edges_.size()) + " edges");
    }
    std::vector<Edge> edges = edges_;
    for (std::size_t k = 0; k < edges.size(); ++k) edges[k].w = weights[k];
    WeightedGraph g(node_count_, std::move(edges));
    g.communities_ = communities_;
    g.labels_ = labels_;
    return g;
}

bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    if (a.node_count_ != b.node_count_ || a.edges_.size() != b.edges_.size()) return false;
    for (std::size_t k = 0; k < a.edges_.size(); ++k) {
        const auto& x = a.edges_[k];
        const auto& y = b.edges_[k];
        if (x.u != y.u || x.v != y.v || x.w != y.w) return false;
    }
    if (a.communities_ != b.communities_) return false;
    for (node_id i = 0; i < a.node_count_; ++i) {
        if (a.label(i) != b.label(i)) return false;
    }
    return true;
}

WeightedGraph edge_subgraph(const WeightedGraph& g, std::span<const std::size_t> edge_indices) {
    constexpr node_id unmapped = static_cast<node_id>(-1);
    std::vector<node_id> remap(g.node_count(), unmapped);
    auto all = g.edges();
    for (auto k : edge_indices) {
        remap[all[k].u] = 0;
        remap[all[k].v] = 0;
    }
    std::vector<std::int64_t> labels;
    std::vector<std::int64_t> communities;
    node_id next = 0;
    for (node_id i = 0; i < g.node_count(); ++i) {
        if (remap[i] == unmapped) continue;
        remap[i] = next++;
        labels.push_back(g.label(i));
        if (g.has_communities()) communities.push_back(g.communities()[i]);
    }
    std::vector<Edge> edges;
    edges.reserve(edge_indices.size());
    for (auto k : edge_indices) edges.push_back({remap[all[k].u], remap[all[k].v], all[k].w});
    WeightedGraph sub(next, std::move(edges));
    if (next == 0) return sub;
    sub = sub.with_labels(std::move(labels));
    if (g.has_communities()) sub = sub.with_communities(std::move(communities));
    return sub;
}

}  // namespace hksim
