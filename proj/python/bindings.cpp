#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "hksim/centrality.hpp"
#include "hksim/commands.hpp"
#include "hksim/config.hpp"
#include "hksim/dynamics.hpp"
#include "hksim/experiment.hpp"
#include "hksim/generator.hpp"
#include "hksim/graph_io.hpp"
#include "hksim/metrics.hpp"
#include "hksim/network_stats.hpp"

namespace py = pybind11;
using namespace hksim;

namespace {

WeightedGraph make_graph(std::size_t n, const std::vector<std::tuple<node_id, node_id, double>>& edges,
                         std::optional<std::vector<std::int64_t>> communities) {
    std::vector<Edge> list;
    list.reserve(edges.size());
    for (auto [u, v, w] : edges) list.push_back({u, v, w});
    WeightedGraph g(n, std::move(list));
    return communities ? g.with_communities(std::move(*communities)) : g;
}

std::vector<std::tuple<node_id, node_id, double>> edge_tuples(const WeightedGraph& g) {
    std::vector<std::tuple<node_id, node_id, double>> out;
    out.reserve(g.edge_count());
    for (const auto& e : g.edges()) out.emplace_back(e.u, e.v, e.w);
    return out;
}

LfrParams lfr_params(const py::kwargs& kw) {
    LfrParams p;
    for (auto [key, value] : kw) {
        const auto k = key.cast<std::string>();
        if (k == "n") p.n = value.cast<std::size_t>();
        else if (k == "k_mean") p.k_mean = value.cast<double>();
        else if (k == "k_min") p.k_min = value.cast<std::size_t>();
        else if (k == "k_max") p.k_max = value.cast<std::size_t>();
        else if (k == "tau_degree") p.tau_degree = value.cast<double>();
        else if (k == "tau_community") p.tau_community = value.cast<double>();
        else if (k == "c_min") p.c_min = value.cast<std::size_t>();
        else if (k == "c_max") p.c_max = value.cast<std::size_t>();
        else if (k == "mu_topo") p.mu_topo = value.cast<double>();
        else if (k == "mu_w") p.mu_w = value.cast<double>();
        else if (k == "beta") p.beta = value.cast<double>();
        else if (k == "seed") p.seed = value.cast<std::uint64_t>();
        else throw py::type_error("generate_lfr: unknown parameter '" + k + "'");
    }
    return p;
}

py::dict result_dict(const SimResult& r) {
    py::dict d;
    d["final_opinions"] = r.final_opinions;
    d["converged_at"] = r.converged_at;
    d["steps"] = r.steps;
    d["stubborn"] = r.stubborn;
    d["seed"] = r.seed;
    std::vector<double> mean, near;
    for (const auto& p : r.series) {
        mean.push_back(p.mean);
        near.push_back(p.fraction_near);
    }
    d["series_mean"] = mean;
    d["series_fraction_near"] = near;
    py::list snaps;
    for (const auto& s : r.snapshots) snaps.append(py::make_tuple(s.step, s.opinions));
    d["snapshots"] = snaps;
    return d;
}

RunConfig config_from(const py::object& config) {
    auto json_module = py::module_::import("json");
    const auto text = json_module.attr("dumps")(config).cast<std::string>();
    return parse_config(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bounded-confidence opinion dynamics with stubborn agents on weighted networks";

    py::register_exception<graph_error>(m, "GraphError", PyExc_ValueError);
    py::register_exception<parameter_error>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<centrality_error>(m, "CentralityError", PyExc_ValueError);
    py::register_exception<sweep_error>(m, "SweepError", PyExc_ValueError);

    py::class_<WeightedGraph>(m, "Graph")
        .def(py::init(&make_graph), py::arg("n"), py::arg("edges"), py::arg("communities") = py::none(),
             "Undirected weighted graph from (u, v, w) tuples.")
        .def_property_readonly("node_count", &WeightedGraph::node_count)
        .def_property_readonly("edge_count", &WeightedGraph::edge_count)
        .def("edges", &edge_tuples)
        .def("degree", &WeightedGraph::degree, py::arg("i"))
        .def("strength", &WeightedGraph::strength, py::arg("i"))
        .def("neighbors",
             [](const WeightedGraph& g, node_id i) {
                 if (i >= g.node_count()) throw py::index_error("node out of range");
                 std::vector<std::pair<node_id, double>> out;
                 for (const auto& nb : g.neighbors(i)) out.emplace_back(nb.node, nb.weight);
                 return out;
             },
             py::arg("i"))
        .def_property_readonly("communities",
                               [](const WeightedGraph& g) -> std::optional<std::vector<std::int64_t>> {
                                   if (!g.has_communities()) return std::nullopt;
                                   return std::vector<std::int64_t>(g.communities().begin(), g.communities().end());
                               })
        .def_property_readonly("labels",
                               [](const WeightedGraph& g) {
                                   std::vector<std::int64_t> out(g.node_count());
                                   for (node_id i = 0; i < g.node_count(); ++i) out[i] = g.label(i);
                                   return out;
                               })
        .def("__eq__", [](const WeightedGraph& a, const WeightedGraph& b) { return a == b; })
        .def("__repr__", [](const WeightedGraph& g) {
            return "<Graph n=" + std::to_string(g.node_count()) + " edges=" + std::to_string(g.edge_count()) + ">";
        });

    m.def(
        "load_edge_list",
        [](const std::filesystem::path& edges, std::optional<std::filesystem::path> communities, bool merge_reverse) {
            EdgeListOptions o;
            o.merge_reverse_duplicates = merge_reverse;
            auto g = load_edge_list(edges, o);
            return communities ? load_communities(*communities, g) : g;
        },
        py::arg("edges"), py::arg("communities") = py::none(), py::arg("merge_reverse") = false);
    m.def("save_edge_list", &save_edge_list, py::arg("graph"), py::arg("path"));
    m.def("save_communities", &save_communities, py::arg("graph"), py::arg("path"));

    m.def(
        "generate_lfr", [](const py::kwargs& kw) { return generate_lfr(lfr_params(kw)); },
        "Weighted LFR-style benchmark graph. Keyword arguments override the defaults "
        "(n, k_mean, k_min, k_max, tau_degree, tau_community, c_min, c_max, mu_topo, mu_w, beta, seed).");

    m.def(
        "network_stats",
        [](const WeightedGraph& g) {
            auto s = network_stats(g);
            py::dict d;
            d["edge_count"] = s.edge_count;
            d["k_min"] = s.k_min;
            d["k_max"] = s.k_max;
            d["k_mean"] = s.k_mean;
            d["assortativity"] = s.assortativity;
            d["clustering"] = s.clustering;
            d["alpha_k"] = s.alpha_k;
            d["alpha_w"] = s.alpha_w;
            if (g.has_communities()) d["modularity"] = modularity(g);
            return d;
        },
        py::arg("graph"));

    m.def(
        "centrality",
        [](const WeightedGraph& g, const std::string& measure, const std::string& distance, double damping) {
            CentralityOptions o;
            o.distance = parse_distance_mode(distance);
            o.damping = damping;
            return compute_scores(g, parse_measure(measure), o).values;
        },
        py::arg("graph"), py::arg("measure"), py::arg("distance") = "reciprocal", py::arg("damping") = 0.85);
    m.def(
        "edge_salience",
        [](const WeightedGraph& g, const std::string& distance) {
            return edge_salience(g, parse_distance_mode(distance)).values;
        },
        py::arg("graph"), py::arg("distance") = "reciprocal");
    m.def(
        "high_salience_skeleton",
        [](const WeightedGraph& g, double threshold, const std::string& distance) {
            return high_salience_skeleton(g, threshold, parse_distance_mode(distance));
        },
        py::arg("graph"), py::arg("threshold") = 0.9, py::arg("distance") = "reciprocal");
    m.def(
        "select_stubborn",
        [](const WeightedGraph& g, const std::string& measure, double fraction, std::uint64_t seed) {
            const auto ms = parse_measure(measure);
            Rng rng(seed);
            return rank_top_fraction(compute_scores(g, ms), fraction, rng, g.node_count());
        },
        py::arg("graph"), py::arg("measure"), py::arg("fraction"), py::arg("seed") = 1);

    m.def(
        "hk_step",
        [](const WeightedGraph& g, std::vector<double> opinions, std::vector<double> confidences,
           std::vector<node_id> stubborn, double stubborn_value, bool include_self) {
            if (opinions.size() != g.node_count() || confidences.size() != g.node_count()) {
                throw py::value_error("opinions and confidences need one entry per node");
            }
            OpinionState s{std::move(opinions), std::move(confidences), std::move(stubborn), 0};
            return hk_step(g, s, stubborn_value, include_self).opinions;
        },
        py::arg("graph"), py::arg("opinions"), py::arg("confidences"), py::arg("stubborn") = std::vector<node_id>{},
        py::arg("stubborn_value") = 1.0, py::arg("include_self") = false);

    m.def(
        "simulate",
        [](const WeightedGraph& g, std::vector<node_id> stubborn, const std::string& strategy, std::size_t max_steps,
           std::uint64_t seed, bool include_self, std::size_t snapshot_interval) {
            StubbornPlan plan;
            plan.stubborn = std::move(stubborn);
            plan.schedule.kind = parse_schedule_kind(strategy);
            SimConfig cfg;
            cfg.max_steps = max_steps;
            cfg.include_self = include_self;
            cfg.snapshot_interval = snapshot_interval;
            SimResult r;
            {
                py::gil_scoped_release release;
                r = run_simulation(g, InitSpec{}, plan, cfg, seed);
            }
            return result_dict(r);
        },
        py::arg("graph"), py::arg("stubborn") = std::vector<node_id>{}, py::arg("strategy") = "static",
        py::arg("max_steps") = 10000, py::arg("seed") = 1, py::arg("include_self") = false,
        py::arg("snapshot_interval") = 0);

    m.def(
        "sweep",
        [](const py::object& config, std::optional<std::filesystem::path> output) {
            auto cfg = config_from(config);
            if (output) cfg.output = *output;
            std::ostringstream log;
            std::size_t failures = 0;
            {
                py::gil_scoped_release release;
                failures = cmd_sweep(cfg, log);
            }
            return failures;
        },
        py::arg("config"), py::arg("output") = py::none(),
        "Runs a sweep from a config mapping (same keys as the JSON config files) and writes the CSV outputs. "
        "Returns the number of failed jobs.");
    m.def(
        "effective_config", [](const py::object& config) { return to_json(config_from(config)).dump(); },
        py::arg("config"), "The complete config, defaults filled in, as a JSON string.");

    m.def("mean_opinion", [](const std::vector<double>& x) { return mean_opinion(x); }, py::arg("opinions"));
    m.def(
        "fraction_near", [](const std::vector<double>& x, double target, double tol) { return fraction_near(x, target, tol); },
        py::arg("opinions"), py::arg("target"), py::arg("tol") = 0.05);
    m.def(
        "histogram", [](const std::vector<double>& x, std::size_t bins) { return histogram(x, bins); },
        py::arg("opinions"), py::arg("bins") = 50);
    m.def(
        "count_clusters",
        [](const std::vector<double>& x, double gap, double min_share) { return count_clusters(x, gap, min_share); },
        py::arg("opinions"), py::arg("gap") = 0.05, py::arg("min_share") = 0.01);
}
