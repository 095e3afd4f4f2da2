#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hksim/graph.hpp"
#include "hksim/rng.hpp"

namespace hksim {

class centrality_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NodeScores {
    std::string measure;
    std::vector<double> values;
};

/// Per-edge values indexed like WeightedGraph::edges().
struct EdgeScores {
    std::vector<double> values;
};

/// hop: every edge has length 1. reciprocal: edge length is 1/w, so heavy
/// ties are short.
enum class DistanceMode { hop, reciprocal };

std::string_view to_string(DistanceMode mode);
DistanceMode parse_distance_mode(std::string_view name);

/// Relative tolerance under which two path lengths count as equal. Hop
/// lengths are integers and compare exactly; sums of reciprocals do not.
inline constexpr double path_length_rtol = 1e-12;

/// All shortest paths from one source. `order` lists reached nodes by
/// non-decreasing distance; `preds[v]` holds (predecessor, edge index) for
/// every co-optimal last hop into v; `paths[v]` counts shortest paths.
struct ShortestPathDag {
    node_id source = 0;
    std::vector<double> dist;
    std::vector<double> paths;
    std::vector<std::vector<std::pair<node_id, std::size_t>>> preds;
    std::vector<node_id> order;

    static constexpr double unreachable = std::numeric_limits<double>::infinity();
};

ShortestPathDag shortest_path_dag(const WeightedGraph& g, node_id source, DistanceMode mode);
/// Reuses the buffers of `dag`.
void shortest_path_dag(const WeightedGraph& g, node_id source, DistanceMode mode, ShortestPathDag& dag);

NodeScores degree_scores(const WeightedGraph& g);
NodeScores strength_scores(const WeightedGraph& g);

/// Sum over unordered pairs {j,k} not containing i of the fraction of
/// shortest j-k paths through i.
NodeScores betweenness(const WeightedGraph& g, DistanceMode mode = DistanceMode::reciprocal);

/// Weighted PageRank by power iteration. Nodes without edges spread their
/// mass uniformly. Throws centrality_error if the L1 change is still above
/// `tol` after `max_iter` iterations.
NodeScores pagerank(const WeightedGraph& g, double damping = 0.85, double tol = 1e-10, int max_iter = 200);

NodeScores k_coreness(const WeightedGraph& g);

/// Repeatedly removes the node of least residual strength; a node's value is
/// the largest such minimum seen up to its removal.
NodeScores s_coreness(const WeightedGraph& g);

/// Fraction of roots whose shortest-path DAG contains the edge.
EdgeScores edge_salience(const WeightedGraph& g, DistanceMode mode = DistanceMode::reciprocal);
NodeScores node_salience(const WeightedGraph& g, const EdgeScores& edge_scores);
NodeScores node_salience(const WeightedGraph& g, DistanceMode mode = DistanceMode::reciprocal);

/// Edges with salience >= threshold and their endpoints.
WeightedGraph high_salience_skeleton(const WeightedGraph& g, const EdgeScores& edge_scores, double threshold = 0.9);
WeightedGraph high_salience_skeleton(const WeightedGraph& g, double threshold = 0.9,
                                     DistanceMode mode = DistanceMode::reciprocal);

/// Node-selection measures. `random` and `none` carry no scores; `none`
/// selects nobody (uncontrolled runs).
enum class Measure { degree, strength, betweenness, pagerank, k_coreness, s_coreness, salience, random, none };

inline constexpr Measure all_centralities[] = {Measure::degree,     Measure::strength,   Measure::betweenness,
                                               Measure::pagerank,   Measure::k_coreness, Measure::s_coreness,
                                               Measure::salience};

std::string_view to_string(Measure m);
/// Throws centrality_error on an unknown name.
Measure parse_measure(std::string_view name);

struct CentralityOptions {
    DistanceMode distance = DistanceMode::reciprocal;
    double damping = 0.85;
};

/// Scores for one measure; `random` and `none` yield an empty score vector.
NodeScores compute_scores(const WeightedGraph& g, Measure m, const CentralityOptions& opts = {});

/// Number of nodes selected for a fraction: max(1, round(fraction * n)).
std::size_t selection_size(std::size_t n, double fraction);

/// The max(1, round(fraction*N)) highest-scoring nodes in rank order, ties by
/// ascending id. Scores whose measure is "random" select uniformly without
/// replacement instead, using `rng`; then `n` gives the population size.
/// Measure "none" selects nobody.
std::vector<node_id> rank_top_fraction(const NodeScores& scores, double fraction, Rng& rng,
                                       std::optional<std::size_t> n = std::nullopt);

}  // namespace hksim
