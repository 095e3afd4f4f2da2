#include "hksim/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace hksim {

std::string_view to_string(DistanceMode mode) {
    return mode == DistanceMode::hop ? "hop" : "reciprocal";
}

DistanceMode parse_distance_mode(std::string_view name) {
    if (name == "hop") return DistanceMode::hop;
    if (name == "reciprocal") return DistanceMode::reciprocal;
    throw centrality_error("unknown distance mode '" + std::string(name) + "' (expected hop or reciprocal)");
}

void shortest_path_dag(const WeightedGraph& g, node_id source, DistanceMode mode, ShortestPathDag& dag) {
    const std::size_t n = g.node_count();
    if (source >= n) throw centrality_error("source node " + std::to_string(source) + " out of range");
    dag.source = source;
    dag.dist.assign(n, ShortestPathDag::unreachable);
    dag.paths.assign(n, 0.0);
    dag.preds.resize(n);
    for (auto& p : dag.preds) p.clear();
    dag.order.clear();
    dag.dist[source] = 0.0;
    dag.paths[source] = 1.0;

    if (mode == DistanceMode::hop) {
        dag.order.push_back(source);
        for (std::size_t head = 0; head < dag.order.size(); ++head) {
            const node_id v = dag.order[head];
            const double nd = dag.dist[v] + 1.0;
            for (const auto& nb : g.neighbors(v)) {
                const node_id w = nb.node;
                if (dag.dist[w] == ShortestPathDag::unreachable) {
                    dag.dist[w] = nd;
                    dag.order.push_back(w);
                }
                if (dag.dist[w] == nd) {
                    dag.paths[w] += dag.paths[v];
                    dag.preds[w].emplace_back(v, nb.edge);
                }
            }
        }
        return;
    }

    using Item = std::pair<double, node_id>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<char> settled(n, 0);
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (settled[v] || d > dag.dist[v]) continue;
        settled[v] = 1;
        dag.order.push_back(v);
        for (const auto& nb : g.neighbors(v)) {
            const node_id w = nb.node;
            if (settled[w]) continue;
            const double nd = d + 1.0 / nb.weight;
            const double cur = dag.dist[w];
            const double slack = path_length_rtol * std::max(nd, cur == ShortestPathDag::unreachable ? nd : cur);
            if (nd < cur - slack) {
                dag.dist[w] = nd;
                dag.paths[w] = dag.paths[v];
                dag.preds[w].assign(1, {v, nb.edge});
                heap.emplace(nd, w);
            } else if (std::abs(nd - cur) <= slack) {
                dag.paths[w] += dag.paths[v];
                dag.preds[w].emplace_back(v, nb.edge);
            }
        }
    }
}

ShortestPathDag shortest_path_dag(const WeightedGraph& g, node_id source, DistanceMode mode) {
    ShortestPathDag dag;
    shortest_path_dag(g, source, mode, dag);
    return dag;
}

NodeScores degree_scores(const WeightedGraph& g) {
    NodeScores s{"degree", std::vector<double>(g.node_count())};
    for (node_id i = 0; i < g.node_count(); ++i) s.values[i] = static_cast<double>(g.degree(i));
    return s;
}

NodeScores strength_scores(const WeightedGraph& g) {
    NodeScores s{"strength", std::vector<double>(g.node_count())};
    for (node_id i = 0; i < g.node_count(); ++i) s.values[i] = g.strength(i);
    return s;
}

NodeScores betweenness(const WeightedGraph& g, DistanceMode mode) {
    const std::size_t n = g.node_count();
    NodeScores s{"betweenness", std::vector<double>(n, 0.0)};
    ShortestPathDag dag;
    std::vector<double> delta(n);
    for (node_id src = 0; src < n; ++src) {
        shortest_path_dag(g, src, mode, dag);
        for (node_id v : dag.order) delta[v] = 0.0;
        for (auto it = dag.order.rbegin(); it != dag.order.rend(); ++it) {
            const node_id v = *it;
            const double coeff = (1.0 + delta[v]) / dag.paths[v];
            for (auto [p, e] : dag.preds[v]) delta[p] += dag.paths[p] * coeff;
            if (v != src) s.values[v] += delta[v];
        }
    }
    // Every unordered pair was counted once from each end.
    for (double& x : s.values) x /= 2.0;
    return s;
}

NodeScores pagerank(const WeightedGraph& g, double damping, double tol, int max_iter) {
    const std::size_t n = g.node_count();
    NodeScores s{"pagerank", {}};
    if (n == 0) return s;
    const double nd = static_cast<double>(n);
    std::vector<double> pi(n, 1.0 / nd), next(n);
    double residual = 0.0;
    for (int iter = 0; iter < max_iter; ++iter) {
        double dangling = 0.0;
        for (node_id j = 0; j < n; ++j) {
            if (g.degree(j) == 0) dangling += pi[j];
        }
        std::fill(next.begin(), next.end(), (1.0 - damping) / nd + damping * dangling / nd);
        for (node_id j = 0; j < n; ++j) {
            if (g.degree(j) == 0) continue;
            const double share = damping * pi[j] / g.strength(j);
            for (const auto& nb : g.neighbors(j)) next[nb.node] += share * nb.weight;
        }
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) residual += std::abs(next[i] - pi[i]);
        pi.swap(next);
        if (residual < tol) {
            s.values = std::move(pi);
            return s;
        }
    }
    throw centrality_error("pagerank did not converge in " + std::to_string(max_iter) +
                           " iterations (residual " + std::to_string(residual) + ")");
}

NodeScores k_coreness(const WeightedGraph& g) {
    // Batagelj-Zaversnik bucket peeling.
    const std::size_t n = g.node_count();
    NodeScores s{"k_coreness", std::vector<double>(n, 0.0)};
    if (n == 0) return s;
    std::vector<std::size_t> deg(n), pos(n), vert(n);
    std::size_t max_deg = 0;
    for (node_id i = 0; i < n; ++i) {
        deg[i] = g.degree(i);
        max_deg = std::max(max_deg, deg[i]);
    }
    std::vector<std::size_t> bin(max_deg + 1, 0);
    for (auto d : deg) ++bin[d];
    std::size_t start = 0;
    for (auto& b : bin) {
        const std::size_t count = b;
        b = start;
        start += count;
    }
    for (node_id v = 0; v < n; ++v) {
        pos[v] = bin[deg[v]]++;
        vert[pos[v]] = v;
    }
    for (std::size_t d = max_deg; d > 0; --d) bin[d] = bin[d - 1];
    bin[0] = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto v = static_cast<node_id>(vert[k]);
        for (const auto& nb : g.neighbors(v)) {
            const node_id u = nb.node;
            if (deg[u] > deg[v]) {
                const std::size_t du = deg[u];
                const std::size_t pu = pos[u];
                const std::size_t pw = bin[du];
                const auto w = static_cast<node_id>(vert[pw]);
                if (u != w) {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                ++bin[du];
                --deg[u];
            }
        }
    }
    for (node_id i = 0; i < n; ++i) s.values[i] = static_cast<double>(deg[i]);
    return s;
}

NodeScores s_coreness(const WeightedGraph& g) {
    const std::size_t n = g.node_count();
    NodeScores s{"s_coreness", std::vector<double>(n, 0.0)};
    std::vector<double> residual(n);
    std::vector<char> removed(n, 0);
    using Item = std::pair<double, node_id>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (node_id i = 0; i < n; ++i) {
        residual[i] = g.strength(i);
        heap.emplace(residual[i], i);
    }
    double level = 0.0;
    while (!heap.empty()) {
        auto [r, v] = heap.top();
        heap.pop();
        if (removed[v] || r != residual[v]) continue;
        removed[v] = 1;
        level = std::max(level, r);
        s.values[v] = level;
        for (const auto& nb : g.neighbors(v)) {
            if (removed[nb.node]) continue;
            residual[nb.node] -= nb.weight;
            heap.emplace(residual[nb.node], nb.node);
        }
    }
    return s;
}

EdgeScores edge_salience(const WeightedGraph& g, DistanceMode mode) {
    const std::size_t n = g.node_count();
    EdgeScores s{std::vector<double>(g.edge_count(), 0.0)};
    if (n == 0) return s;
    std::vector<std::size_t> count(g.edge_count(), 0);
    ShortestPathDag dag;
    for (node_id root = 0; root < n; ++root) {
        shortest_path_dag(g, root, mode, dag);
        for (node_id v : dag.order) {
            for (auto [p, e] : dag.preds[v]) ++count[e];
        }
    }
    for (std::size_t e = 0; e < count.size(); ++e) s.values[e] = static_cast<double>(count[e]) / static_cast<double>(n);
    return s;
}

NodeScores node_salience(const WeightedGraph& g, const EdgeScores& edge_scores) {
    if (edge_scores.values.size() != g.edge_count()) throw centrality_error("edge scores do not match the graph");
    NodeScores s{"salience", std::vector<double>(g.node_count(), 0.0)};
    for (node_id i = 0; i < g.node_count(); ++i) {
        for (const auto& nb : g.neighbors(i)) s.values[i] += edge_scores.values[nb.edge];
    }
    return s;
}

NodeScores node_salience(const WeightedGraph& g, DistanceMode mode) {
    return node_salience(g, edge_salience(g, mode));
}

WeightedGraph high_salience_skeleton(const WeightedGraph& g, const EdgeScores& edge_scores, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw centrality_error("salience threshold must lie in (0,1]");
    if (edge_scores.values.size() != g.edge_count()) throw centrality_error("edge scores do not match the graph");
    std::vector<std::size_t> keep;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (edge_scores.values[e] >= threshold) keep.push_back(e);
    }
    return edge_subgraph(g, keep);
}

WeightedGraph high_salience_skeleton(const WeightedGraph& g, double threshold, DistanceMode mode) {
    return high_salience_skeleton(g, edge_salience(g, mode), threshold);
}

namespace {

constexpr std::pair<Measure, std::string_view> measure_names[] = {
    {Measure::degree, "degree"},         {Measure::strength, "strength"},     {Measure::betweenness, "betweenness"},
    {Measure::pagerank, "pagerank"},     {Measure::k_coreness, "k_coreness"}, {Measure::s_coreness, "s_coreness"},
    {Measure::salience, "salience"},     {Measure::random, "random"},         {Measure::none, "none"},
};

}  // namespace

std::string_view to_string(Measure m) {
    for (auto [value, name] : measure_names) {
        if (value == m) return name;
    }
    return "?";
}

Measure parse_measure(std::string_view name) {
    for (auto [value, known] : measure_names) {
        if (known == name) return value;
    }
    std::string msg = "unknown measure '" + std::string(name) + "' (expected one of";
    for (auto [value, known] : measure_names) msg += " " + std::string(known);
    throw centrality_error(msg + ")");
}

NodeScores compute_scores(const WeightedGraph& g, Measure m, const CentralityOptions& opts) {
    switch (m) {
        case Measure::degree: return degree_scores(g);
        case Measure::strength: return strength_scores(g);
        case Measure::betweenness: return betweenness(g, opts.distance);
        case Measure::pagerank: return pagerank(g, opts.damping);
        case Measure::k_coreness: return k_coreness(g);
        case Measure::s_coreness: return s_coreness(g);
        case Measure::salience: return node_salience(g, opts.distance);
        case Measure::random: return NodeScores{"random", {}};
        case Measure::none: return NodeScores{"none", {}};
    }
    throw centrality_error("unhandled measure");
}

std::size_t selection_size(std::size_t n, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw centrality_error("selection fraction must lie in (0,1]");
    if (n == 0) return 0;
    const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    return std::clamp<std::size_t>(k, 1, n);
}

std::vector<node_id> rank_top_fraction(const NodeScores& scores, double fraction, Rng& rng,
                                       std::optional<std::size_t> n) {
    if (scores.measure == "none") return {};
    if (scores.measure == "random") {
        const std::size_t pop = n.value_or(scores.values.size());
        const std::size_t k = selection_size(pop, fraction);
        std::vector<node_id> ids(pop);
        std::iota(ids.begin(), ids.end(), node_id{0});
        // Partial Fisher-Yates.
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + uniform_index(rng, pop - i);
            std::swap(ids[i], ids[j]);
        }
        ids.resize(k);
        return ids;
    }
    const std::size_t pop = scores.values.size();
    if (n && *n != pop) throw centrality_error("score vector length does not match node count");
    const std::size_t k = selection_size(pop, fraction);
    std::vector<node_id> ids(pop);
    std::iota(ids.begin(), ids.end(), node_id{0});
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(), [&](node_id a, node_id b) {
        if (scores.values[a] != scores.values[b]) return scores.values[a] > scores.values[b];
        return a < b;
    });
    ids.resize(k);
    return ids;
}

}  // namespace hksim
