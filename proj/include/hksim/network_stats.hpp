#pragma once

#include <span>

#include "hksim/graph.hpp"

namespace hksim {

/// Descriptive statistics matching the columns of the usual LFR summary table.
struct NetworkStats {
    std::size_t edge_count = 0;
    std::size_t k_min = 0;
    std::size_t k_max = 0;
    double k_mean = 0.0;
    double assortativity = 0.0;  // Pearson degree correlation over edge endpoints
    double clustering = 0.0;     // transitivity: 3 * triangles / connected triples
    double alpha_k = 0.0;        // discrete power-law MLE over degrees
    double alpha_w = 0.0;        // continuous power-law MLE over edge weights
};

/// Throws graph_error on an empty graph.
NetworkStats network_stats(const WeightedGraph& g);

double degree_assortativity(const WeightedGraph& g);
double global_clustering(const WeightedGraph& g);

/// Newman modularity of the graph's community labels (unweighted).
double modularity(const WeightedGraph& g);

/// alpha = 1 + n / sum ln(x / (x_min - 1/2)), x_min the observed minimum.
double powerlaw_alpha_discrete(std::span<const double> samples);
/// alpha = 1 + n / sum ln(x / x_min), x_min the observed minimum.
double powerlaw_alpha_continuous(std::span<const double> samples);

}  // namespace hksim
