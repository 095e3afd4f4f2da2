#include "hksim/network_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <vector>

namespace hksim {

double degree_assortativity(const WeightedGraph& g) {
    // Each edge contributes both (k_u, k_v) and (k_v, k_u), so the two
    // marginals coincide and r = (<xy> - <x>^2) / (<x^2> - <x>^2).
    if (g.edge_count() == 0) return 0.0;
    double sum_xy = 0.0, sum_x = 0.0, sum_x2 = 0.0;
    for (const auto& e : g.edges()) {
        const double a = static_cast<double>(g.degree(e.u));
        const double b = static_cast<double>(g.degree(e.v));
        sum_xy += 2.0 * a * b;
        sum_x += a + b;
        sum_x2 += a * a + b * b;
    }
    const double m2 = 2.0 * static_cast<double>(g.edge_count());
    const double mean = sum_x / m2;
    const double var = sum_x2 / m2 - mean * mean;
    if (var <= 1e-12 * std::max(1.0, mean * mean)) return 0.0;
    return (sum_xy / m2 - mean * mean) / var;
}

double global_clustering(const WeightedGraph& g) {
    if (g.node_count() < 3) return 0.0;
    const std::size_t n = g.node_count();
    std::vector<char> mark(n, 0);
    double closed = 0.0;
    double triples = 0.0;
    for (node_id i = 0; i < n; ++i) {
        const double k = static_cast<double>(g.degree(i));
        triples += k * (k - 1.0) / 2.0;
        for (const auto& nb : g.neighbors(i)) mark[nb.node] = 1;
        // Count each triangle once from its smallest vertex.
        for (const auto& nb : g.neighbors(i)) {
            if (nb.node <= i) continue;
            for (const auto& nb2 : g.neighbors(nb.node)) {
                if (nb2.node > nb.node && mark[nb2.node]) closed += 1.0;
            }
        }
        for (const auto& nb : g.neighbors(i)) mark[nb.node] = 0;
    }
    if (triples == 0.0) return 0.0;
    return 3.0 * closed / triples;
}

double modularity(const WeightedGraph& g) {
    if (!g.has_communities()) throw graph_error("modularity needs community labels");
    if (g.edge_count() == 0) return 0.0;
    const double m = static_cast<double>(g.edge_count());
    std::unordered_map<std::int64_t, double> degree_sum;
    double internal = 0.0;
    auto comm = g.communities();
    for (const auto& e : g.edges()) {
        if (comm[e.u] == comm[e.v]) internal += 1.0;
    }
    for (node_id i = 0; i < g.node_count(); ++i) degree_sum[comm[i]] += static_cast<double>(g.degree(i));
    double expected = 0.0;
    for (const auto& [c, d] : degree_sum) expected += (d / (2.0 * m)) * (d / (2.0 * m));
    return internal / m - expected;
}

double powerlaw_alpha_discrete(std::span<const double> samples) {
    if (samples.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double x_min = *std::min_element(samples.begin(), samples.end());
    double acc = 0.0;
    for (double x : samples) acc += std::log(x / (x_min - 0.5));
    return 1.0 + static_cast<double>(samples.size()) / acc;
}

double powerlaw_alpha_continuous(std::span<const double> samples) {
    if (samples.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double x_min = *std::min_element(samples.begin(), samples.end());
    double acc = 0.0;
    for (double x : samples) acc += std::log(x / x_min);
    if (acc == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 + static_cast<double>(samples.size()) / acc;
}

NetworkStats network_stats(const WeightedGraph& g) {
    if (g.empty()) throw graph_error("network_stats on an empty graph");
    NetworkStats s;
    s.edge_count = g.edge_count();
    s.k_min = std::numeric_limits<std::size_t>::max();
    std::vector<double> degrees;
    degrees.reserve(g.node_count());
    double total = 0.0;
    for (node_id i = 0; i < g.node_count(); ++i) {
        const auto k = g.degree(i);
        s.k_min = std::min(s.k_min, k);
        s.k_max = std::max(s.k_max, k);
        total += static_cast<double>(k);
        if (k > 0) degrees.push_back(static_cast<double>(k));
    }
    s.k_mean = total / static_cast<double>(g.node_count());
    s.assortativity = degree_assortativity(g);
    s.clustering = global_clustering(g);
    s.alpha_k = powerlaw_alpha_discrete(degrees);
    std::vector<double> weights;
    weights.reserve(g.edge_count());
    for (const auto& e : g.edges()) weights.push_back(e.w);
    s.alpha_w = powerlaw_alpha_continuous(weights);
    return s;
}

}  // namespace hksim
