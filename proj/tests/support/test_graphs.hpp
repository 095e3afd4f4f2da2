#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "hksim/graph.hpp"
#include "hksim/rng.hpp"

namespace hksim::testing {

inline WeightedGraph path_graph(std::size_t n, double w = 1.0) {
    std::vector<Edge> edges;
    for (node_id i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, w});
    return {n, edges};
}

// w01 = 2, w12 = 1
inline WeightedGraph weighted_p3() { return {3, {{0, 1, 2.0}, {1, 2, 1.0}}}; }

inline WeightedGraph triangle() { return {3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}}; }

// Hub is node 0.
inline WeightedGraph star(std::size_t leaves) {
    std::vector<Edge> edges;
    for (node_id i = 1; i <= leaves; ++i) edges.push_back({0, i, 1.0});
    return {leaves + 1, edges};
}

inline WeightedGraph complete_graph(std::size_t n, double w = 1.0) {
    std::vector<Edge> edges;
    for (node_id i = 0; i < n; ++i)
        for (node_id j = i + 1; j < n; ++j) edges.push_back({i, j, w});
    return {n, edges};
}

// K4 on 0..3 with node 4 hanging off node 3.
inline WeightedGraph k4_pendant() {
    const auto k4 = complete_graph(4);
    auto edges = std::vector<Edge>(k4.edges().begin(), k4.edges().end());
    edges.push_back({3, 4, 1.0});
    return {5, edges};
}

inline double random_weight(Rng& rng, bool discrete) {
    static constexpr double levels[] = {0.5, 1.0, 1.0, 2.0, 3.0};
    if (discrete) return levels[uniform_index<std::size_t>(rng, 5)];
    return uniform(rng, 0.1, 5.0);
}

/// Erdos-Renyi style graph on n nodes. Discrete weights make equal-length
/// alternatives common, which is where shortest-path code goes wrong.
inline WeightedGraph random_graph(Rng& rng, std::size_t n, double p, bool discrete_weights, bool unit_weights = false) {
    std::vector<Edge> edges;
    for (node_id i = 0; i < n; ++i) {
        for (node_id j = i + 1; j < n; ++j) {
            if (uniform01(rng) < p) edges.push_back({i, j, unit_weights ? 1.0 : random_weight(rng, discrete_weights)});
        }
    }
    return {n, edges};
}

inline WeightedGraph random_tree(Rng& rng, std::size_t n, bool unit_weights = false) {
    std::vector<node_id> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < n; ++i) {
        const auto parent = uniform_index<std::size_t>(rng, i);
        edges.push_back({perm[i], perm[parent], unit_weights ? 1.0 : random_weight(rng, false)});
    }
    return {n, edges};
}

/// Same graph with node i renamed to perm[i].
inline WeightedGraph relabel(const WeightedGraph& g, const std::vector<node_id>& perm) {
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) edges.push_back({perm[e.u], perm[e.v], e.w});
    return {g.node_count(), edges};
}

}  // namespace hksim::testing
