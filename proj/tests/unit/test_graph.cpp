#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "../support/test_graphs.hpp"
#include "hksim/graph_io.hpp"
#include "hksim/network_stats.hpp"

using namespace hksim;
using namespace hksim::testing;

namespace {

WeightedGraph parse(const std::string& text, EdgeListOptions opts = {}) {
    std::istringstream in(text);
    return parse_edge_list(in, "mem", opts);
}

WeightedGraph parse_comm(const std::string& text, const WeightedGraph& g) {
    std::istringstream in(text);
    return parse_communities(in, "mem", g);
}

std::string error_of(auto&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

void check_invariants(const WeightedGraph& g) {
    std::size_t degree_sum = 0;
    for (node_id i = 0; i < g.node_count(); ++i) {
        degree_sum += g.degree(i);
        double s = 0.0;
        for (const auto& nb : g.neighbors(i)) {
            CHECK(nb.node != i);
            CHECK(nb.weight > 0.0);
            CHECK(std::isfinite(nb.weight));
            bool mirrored = false;
            for (const auto& back : g.neighbors(nb.node)) mirrored |= back.node == i && back.weight == nb.weight;
            CHECK(mirrored);
            s += nb.weight;
        }
        CHECK(s == doctest::Approx(g.strength(i)));
    }
    CHECK(degree_sum == 2 * g.edge_count());
}

}  // namespace

TEST_CASE("construction rejects invalid edges") {
    CHECK_THROWS_AS(WeightedGraph(3, {{1, 1, 1.0}}), graph_error);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, 1.0}, {1, 0, 2.0}}), graph_error);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, 0.0}}), graph_error);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, -1.0}}), graph_error);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, INFINITY}}), graph_error);
    CHECK_THROWS_AS(WeightedGraph(2, {{0, 2, 1.0}}), graph_error);
}

TEST_CASE("adjacency is sorted and symmetric") {
    Rng rng(3);
    for (int k = 0; k < 30; ++k) {
        auto g = random_graph(rng, 3 + k % 9, 0.5, k % 2 == 0);
        check_invariants(g);
        for (node_id i = 0; i < g.node_count(); ++i) {
            auto nb = g.neighbors(i);
            CHECK(std::is_sorted(nb.begin(), nb.end(), [](auto& a, auto& b) { return a.node < b.node; }));
            for (const auto& x : nb) CHECK(g.find_edge(i, x.node) == x.edge);
        }
    }
}

TEST_CASE("edge list P3") {
    auto g = parse("0 1 2.0\n1 2 1.0\n");
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.strength(0) == 2.0);
    CHECK(g.strength(1) == 3.0);
    CHECK(g.strength(2) == 1.0);
}

TEST_CASE("edge list accepts commas, comments and a header") {
    auto g = parse("u,v,w\n# comment\n0,1,2.0\n\n1\t2 1.0\n");
    CHECK(g.edge_count() == 2);
    CHECK(g.strength(1) == 3.0);
}

TEST_CASE("edge list errors") {
    CHECK(error_of([] { parse("0 1 1\n3 3 1.0\n"); }).find("self-loop") != std::string::npos);
    CHECK(error_of([] { parse("0 1 2.0\n1 0 2.0\n"); }).find("duplicate edge") != std::string::npos);
    CHECK_THROWS_AS(parse("0 1\n"), parse_error);
    CHECK_THROWS_AS(parse("0 1 x\n"), parse_error);
    CHECK_THROWS_AS(parse("0 1 0\n"), graph_error);
    CHECK_THROWS_AS(load_edge_list("/nonexistent/file"), io_error);
}

TEST_CASE("reverse duplicates merge only when asked and equal") {
    EdgeListOptions merge{true};
    auto g = parse("0 1 2.0\n1 0 2.0\n1 2 1\n2 1 1\n", merge);
    CHECK(g.edge_count() == 2);
    CHECK_THROWS_AS(parse("0 1 2.0\n1 0 3.0\n", merge), graph_error);
    CHECK_THROWS_AS(parse("0 1 2.0\n0 1 2.0\n", merge), graph_error);
}

TEST_CASE("community files") {
    auto g = parse("0 1 2.0\n1 2 1.0\n");
    auto c = parse_comm("0 1\n1 1\n2 2\n", g);
    REQUIRE(c.has_communities());
    CHECK(std::vector<std::int64_t>(c.communities().begin(), c.communities().end()) == std::vector<std::int64_t>{1, 1, 2});
    CHECK(error_of([&] { parse_comm("0 1\n1 1\n", g); }).find("node 2 has no community") != std::string::npos);
    CHECK(error_of([&] { parse_comm("0 1\n1 1\n2 2\n7 1\n", g); }).find("unknown node 7") != std::string::npos);
    CHECK(error_of([&] { parse_comm("0 1\n0 1\n1 1\n2 2\n", g); }).find("listed twice") != std::string::npos);
}

TEST_CASE("labels survive a round trip") {
    auto g = parse("10 30 1.5\n30 20 2.5\n");
    CHECK(g.label(0) == 10);
    CHECK(g.label(1) == 30);
    std::ostringstream out;
    write_edge_list(g, out);
    auto h = parse(out.str());
    CHECK(h.edge_count() == 2);
    std::ostringstream again;
    write_edge_list(h, again);
    CHECK(again.str() == out.str());
}

TEST_CASE("round trip property: random graphs reload bit-exactly") {
    Rng rng(17);
    for (int k = 0; k < 50; ++k) {
        // Continuous weights exercise shortest round-trip formatting.
        auto g = random_graph(rng, 2 + k % 12, 0.6, false);
        if (g.edge_count() == 0) continue;
        std::vector<std::int64_t> comm(g.node_count());
        for (auto& c : comm) c = uniform_index<std::int64_t>(rng, 3);
        g = g.with_communities(comm);
        std::ostringstream e, c;
        write_edge_list(g, e);
        write_communities(g, c);
        auto h = parse(e.str());
        h = parse_comm(c.str(), h);
        REQUIRE(h.edge_count() == g.edge_count());
        // Nodes may be renumbered by first appearance; compare through labels.
        for (const auto& ed : g.edges()) {
            bool found = false;
            for (const auto& f : h.edges()) {
                const auto a = h.label(f.u), b = h.label(f.v);
                if (((a == ed.u && b == ed.v) || (a == ed.v && b == ed.u)) && f.w == ed.w) found = true;
            }
            CHECK(found);
        }
        for (node_id i = 0; i < h.node_count(); ++i) CHECK(h.communities()[i] == comm[h.label(i)]);
    }
}

TEST_CASE("save and load files; no community file means no communities") {
    const auto dir = std::filesystem::temp_directory_path() / "hksim_graph_test";
    std::filesystem::create_directories(dir);
    auto p3 = weighted_p3();
    save_edge_list(p3, dir / "p3.edges");
    auto back = load_edge_list(dir / "p3.edges");
    CHECK(back == p3);
    CHECK_FALSE(back.has_communities());
    CHECK_THROWS_AS(save_communities(p3, dir / "p3.comm"), graph_error);

    auto k4 = complete_graph(4, 1.25);
    save_edge_list(k4, dir / "k4.edges");
    auto s1 = network_stats(k4);
    auto s2 = network_stats(load_edge_list(dir / "k4.edges"));
    CHECK(s1.edge_count == s2.edge_count);
    CHECK(s1.clustering == s2.clustering);
    CHECK(s1.alpha_w == s2.alpha_w);
    std::filesystem::remove_all(dir);
}

TEST_CASE("network stats on small graphs") {
    auto t = network_stats(triangle());
    CHECK(t.edge_count == 3);
    CHECK(t.k_min == 2);
    CHECK(t.k_max == 2);
    CHECK(t.k_mean == 2.0);
    CHECK(t.clustering == doctest::Approx(1.0));

    auto s = network_stats(star(3));
    CHECK(s.assortativity == doctest::Approx(-1.0));
    CHECK(s.clustering == 0.0);
}

TEST_CASE("degree sum property") {
    Rng rng(5);
    for (int k = 0; k < 20; ++k) {
        auto g = random_graph(rng, 5 + k, 0.3, true);
        std::size_t sum = 0;
        for (node_id i = 0; i < g.node_count(); ++i) sum += g.degree(i);
        CHECK(network_stats(g).edge_count * 2 == sum);
    }
}

TEST_CASE("modularity of two disjoint triangles split correctly") {
    WeightedGraph g(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}});
    // Two equal isolated halves: Q = 2 * (3/6 - (6/12)^2) = 0.5.
    CHECK(modularity(g.with_communities({0, 0, 0, 1, 1, 1})) == doctest::Approx(0.5));
    CHECK(modularity(g.with_communities({0, 0, 0, 0, 0, 0})) == doctest::Approx(0.0));
}

TEST_CASE("power-law fits recover their exponent") {
    Rng rng(8);
    std::vector<double> cont, disc;
    for (int i = 0; i < 20000; ++i) {
        // Inverse transform for density ~ x^-2.5 on [1, inf).
        cont.push_back(std::pow(1.0 - uniform01(rng), -1.0 / 1.5));
    }
    CHECK(std::abs(powerlaw_alpha_continuous(cont) - 2.5) <= 0.1);
    for (double x : cont) disc.push_back(std::floor(5.0 * x));
    CHECK(std::abs(powerlaw_alpha_discrete(disc) - 2.5) <= 0.25);
}

TEST_CASE("edge subgraph keeps labels and weights") {
    auto g = weighted_p3().with_labels({7, 8, 9});
    std::vector<std::size_t> keep{1};
    auto h = edge_subgraph(g, keep);
    CHECK(h.node_count() == 2);
    CHECK(h.edge_count() == 1);
    CHECK(h.edges()[0].w == 1.0);
    CHECK(h.label(0) == 8);
    CHECK(h.label(1) == 9);
}
