#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "../support/oracles.hpp"
#include "../support/test_graphs.hpp"
#include "hksim/centrality.hpp"
#include "hksim/generator.hpp"

using namespace hksim;
using namespace hksim::testing;

namespace {

std::vector<double> values(const NodeScores& s) { return s.values; }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("degree and strength") {
    CHECK(values(degree_scores(path_graph(3))) == std::vector<double>{1, 2, 1});
    CHECK(values(degree_scores(star(3))) == std::vector<double>{3, 1, 1, 1});
    CHECK(values(degree_scores(triangle())) == std::vector<double>{2, 2, 2});
    CHECK(values(strength_scores(weighted_p3())) == std::vector<double>{2, 3, 1});
    Rng rng(1);
    auto g = random_graph(rng, 8, 0.5, false, true);
    CHECK(values(strength_scores(g)) == values(degree_scores(g)));
}

TEST_CASE("strength follows degree^1.5 for hubs of a generated instance") {
    auto g = generate_lfr(LfrParams{});
    for (node_id i = 0; i < g.node_count(); ++i) {
        if (g.degree(i) < 50) continue;
        const double ratio = g.strength(i) / std::pow(static_cast<double>(g.degree(i)), 1.5);
        CHECK(ratio > 0.8);
        CHECK(ratio < 1.2);
    }
}

TEST_CASE("shortest path dag") {
    auto d = shortest_path_dag(path_graph(3), 0, DistanceMode::hop);
    CHECK(d.dist == std::vector<double>{0, 1, 2});
    CHECK(d.order == std::vector<node_id>{0, 1, 2});

    auto t = shortest_path_dag(triangle(), 0, DistanceMode::hop);
    CHECK(t.paths[1] == 1.0);
    CHECK(t.paths[2] == 1.0);

    auto w = shortest_path_dag(weighted_p3(), 0, DistanceMode::reciprocal);
    CHECK(w.dist == std::vector<double>{0, 0.5, 1.5});

    // Square: two shortest routes to the opposite corner.
    WeightedGraph sq(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
    auto s = shortest_path_dag(sq, 0, DistanceMode::hop);
    CHECK(s.paths[2] == 2.0);
    CHECK(s.preds[2].size() == 2);

    WeightedGraph split(4, {{0, 1, 1}, {2, 3, 1}});
    auto u = shortest_path_dag(split, 0, DistanceMode::hop);
    CHECK(u.dist[2] == ShortestPathDag::unreachable);
    CHECK(u.order.size() == 2);
}

TEST_CASE("betweenness examples") {
    CHECK(values(betweenness(path_graph(3))) == std::vector<double>{0, 1, 0});
    CHECK(values(betweenness(star(3))) == std::vector<double>{3, 0, 0, 0});
    WeightedGraph sq(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
    CHECK(values(betweenness(sq, DistanceMode::hop)) == std::vector<double>{0.5, 0.5, 0.5, 0.5});
    // Reciprocal lengths: the heavy detour 0-2-1 (0.25 + 0.25) beats the light edge 0-1 (1).
    WeightedGraph tri(3, {{0, 1, 1}, {0, 2, 4}, {1, 2, 4}});
    CHECK(values(betweenness(tri, DistanceMode::reciprocal)) == std::vector<double>{0, 0, 1});
    CHECK(values(betweenness(tri, DistanceMode::hop)) == std::vector<double>{0, 0, 0});
}

TEST_CASE("betweenness property: matches exhaustive path enumeration") {
    Rng rng(2024);
    for (int k = 0; k < 60; ++k) {
        const std::size_t n = 4 + uniform_index<std::size_t>(rng, 5);
        auto g = random_graph(rng, n, uniform(rng, 0.3, 0.9), k % 2 == 0);
        for (auto mode : {DistanceMode::hop, DistanceMode::reciprocal}) {
            const auto got = values(betweenness(g, mode));
            const auto want = brute_betweenness(g, mode == DistanceMode::reciprocal);
            CHECK(max_abs_diff(got, want) <= 1e-9);
        }
    }
}

TEST_CASE("pagerank") {
    auto t = values(pagerank(triangle()));
    for (double v : t) CHECK(std::abs(v - 1.0 / 3.0) <= 1e-12);

    auto s = values(pagerank(star(3)));
    CHECK(max_abs_diff(s, dense_pagerank(star(3), 0.85)) <= 1e-9);

    Rng rng(9);
    for (int k = 0; k < 30; ++k) {
        auto g = random_graph(rng, 2 + k % 10, 0.4, false);
        auto p = values(pagerank(g));
        CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-9);
        CHECK(max_abs_diff(p, dense_pagerank(g, 0.85)) <= 1e-9);
    }
    CHECK_THROWS_AS(pagerank(star(5), 0.85, 1e-10, 1), centrality_error);
}

TEST_CASE("pagerank is a fixed point") {
    Rng rng(12);
    auto g = random_graph(rng, 12, 0.4, false);
    auto p = values(pagerank(g));
    // One more application of the update, written out.
    const double d = 0.85, n = static_cast<double>(g.node_count());
    double dangling = 0.0;
    for (node_id j = 0; j < g.node_count(); ++j)
        if (g.degree(j) == 0) dangling += p[j];
    std::vector<double> q(g.node_count(), (1 - d) / n + d * dangling / n);
    for (node_id j = 0; j < g.node_count(); ++j)
        for (const auto& nb : g.neighbors(j)) q[nb.node] += d * p[j] * nb.weight / g.strength(j);
    double change = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) change += std::abs(q[i] - p[i]);
    CHECK(change < 1e-10);
}

TEST_CASE("k-coreness") {
    CHECK(values(k_coreness(triangle())) == std::vector<double>{2, 2, 2});
    CHECK(values(k_coreness(path_graph(3))) == std::vector<double>{1, 1, 1});
    CHECK(values(k_coreness(k4_pendant())) == std::vector<double>{3, 3, 3, 3, 1});
}

TEST_CASE("s-coreness") {
    CHECK(values(s_coreness(WeightedGraph(2, {{0, 1, 5.0}}))) == std::vector<double>{5, 5});
    CHECK(max_abs_diff(values(s_coreness(weighted_p3())), threshold_sweep_s_coreness(weighted_p3())) <= 1e-9);
    Rng rng(31);
    for (int k = 0; k < 40; ++k) {
        auto unit = random_graph(rng, 3 + k % 10, 0.5, false, true);
        CHECK(values(s_coreness(unit)) == values(k_coreness(unit)));
        auto g = random_graph(rng, 3 + k % 6, 0.6, k % 2 == 0);
        CHECK(max_abs_diff(values(s_coreness(g)), threshold_sweep_s_coreness(g)) <= 1e-9);
    }
}

TEST_CASE("salience on trees and the triangle") {
    Rng rng(77);
    for (int k = 0; k < 20; ++k) {
        auto t = random_tree(rng, 2 + k);
        for (auto mode : {DistanceMode::hop, DistanceMode::reciprocal}) {
            for (double s : edge_salience(t, mode).values) CHECK(s == 1.0);
            CHECK(values(node_salience(t, mode)) == values(degree_scores(t)));
        }
        auto hss = high_salience_skeleton(t, 1.0);
        CHECK(hss.node_count() == t.node_count());
        CHECK(hss.edge_count() == t.edge_count());
    }
    for (double s : edge_salience(triangle()).values) CHECK(std::abs(s - 2.0 / 3.0) <= 1e-15);
    for (double s : values(node_salience(triangle()))) CHECK(std::abs(s - 4.0 / 3.0) <= 1e-15);
    CHECK(values(node_salience(path_graph(3))) == std::vector<double>{1, 2, 1});
    auto hss = high_salience_skeleton(triangle(), 0.9);
    CHECK(hss.edge_count() == 0);
    CHECK(hss.node_count() == 0);
}

TEST_CASE("salience property: oracle and degree bound") {
    Rng rng(5150);
    for (int k = 0; k < 40; ++k) {
        auto g = random_graph(rng, 4 + k % 5, 0.6, k % 2 == 0);
        for (auto mode : {DistanceMode::hop, DistanceMode::reciprocal}) {
            auto es = edge_salience(g, mode);
            CHECK(max_abs_diff(es.values, brute_edge_salience(g, mode == DistanceMode::reciprocal)) <= 1e-12);
            auto ns = node_salience(g, es);
            for (node_id i = 0; i < g.node_count(); ++i) CHECK(ns.values[i] <= static_cast<double>(g.degree(i)) + 1e-12);
        }
    }
}

TEST_CASE("salience on a generated instance is bimodal") {
    auto g = generate_lfr(LfrParams{});
    auto es = edge_salience(g);
    std::size_t low = 0, high = 0;
    for (double s : es.values) {
        low += s < 0.1;
        high += s > 0.9;
    }
    const double m = static_cast<double>(es.values.size());
    CHECK(low / m > 0.5);
    CHECK(high / m > 0.03);
    CHECK((m - low - high) / m < 0.35);
}

TEST_CASE("measure names") {
    for (auto m : {Measure::degree, Measure::strength, Measure::betweenness, Measure::pagerank, Measure::k_coreness,
                   Measure::s_coreness, Measure::salience, Measure::random, Measure::none}) {
        CHECK(parse_measure(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_measure("closeness"), centrality_error);
    CHECK(parse_distance_mode("hop") == DistanceMode::hop);
    CHECK(parse_distance_mode("reciprocal") == DistanceMode::reciprocal);
    CHECK_THROWS(parse_distance_mode("euclid"));
}

TEST_CASE("selection size and ranking") {
    CHECK(selection_size(1000, 0.001) == 1);
    CHECK(selection_size(1000, 0.0001) == 1);
    CHECK(selection_size(1000, 0.02) == 20);
    CHECK(selection_size(10, 1.0) == 10);

    Rng rng(1);
    NodeScores s{"degree", {5, 5, 3}};
    CHECK(rank_top_fraction(s, 1.0 / 3.0, rng) == std::vector<node_id>{0});
    auto all = rank_top_fraction(s, 1.0, rng);
    CHECK(all == std::vector<node_id>{0, 1, 2});

    NodeScores none{"none", {}};
    CHECK(rank_top_fraction(none, 0.5, rng, 10).empty());
}

TEST_CASE("ranking property: size, order, determinism, random without replacement") {
    Rng gen(99);
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 1 + uniform_index<std::size_t>(gen, 200);
        NodeScores s{"degree", std::vector<double>(n)};
        for (auto& v : s.values) v = static_cast<double>(uniform_index<int>(gen, 5));
        const double f = uniform(gen, 0.0, 1.0);
        Rng a(1), b(2);
        auto top = rank_top_fraction(s, f, a);
        CHECK(top.size() == std::max<std::size_t>(1, std::llround(f * n)));
        CHECK(top == rank_top_fraction(s, f, b));
        for (std::size_t i = 1; i < top.size(); ++i) {
            const bool ordered = s.values[top[i - 1]] > s.values[top[i]] ||
                                 (s.values[top[i - 1]] == s.values[top[i]] && top[i - 1] < top[i]);
            CHECK(ordered);
        }
        // Nothing left out scores higher than the last one picked.
        std::set<node_id> picked(top.begin(), top.end());
        for (node_id i = 0; i < n; ++i) {
            if (!picked.count(i)) CHECK(s.values[i] <= s.values[top.back()]);
        }

        NodeScores r{"random", {}};
        Rng c(k);
        auto rnd = rank_top_fraction(r, f, c, n);
        CHECK(rnd.size() == top.size());
        CHECK(std::set<node_id>(rnd.begin(), rnd.end()).size() == rnd.size());
        for (auto v : rnd) CHECK(v < n);
    }
}

TEST_CASE("random selection covers the population uniformly") {
    std::vector<int> hits(10, 0);
    NodeScores r{"random", {}};
    for (int k = 0; k < 5000; ++k) {
        Rng rng(k);
        for (auto v : rank_top_fraction(r, 0.2, rng, 10)) ++hits[v];
    }
    // 10000 picks over 10 nodes.
    for (int h : hits) CHECK(std::abs(h - 1000) < 150);
}

TEST_CASE("compute_scores dispatch") {
    auto g = weighted_p3();
    CHECK(compute_scores(g, Measure::strength).values == std::vector<double>{2, 3, 1});
    CHECK(compute_scores(g, Measure::salience).values == std::vector<double>{1, 2, 1});
    CHECK(compute_scores(g, Measure::random).values.empty());
    CHECK(compute_scores(g, Measure::none).values.empty());
    CHECK(compute_scores(g, Measure::betweenness).measure == "betweenness");
}
