#include "hksim/config.hpp"

#include <fstream>
#include <set>

namespace hksim {

namespace {

using nlohmann::json;

/// Reads keys out of one JSON object and remembers which were consumed, so
/// leftovers can be reported as unknown.
class Section {
public:
    Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw config_error(where() + "expected an object");
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out) {
        if (auto* v = find(key)) {
            if (!v->is_number()) throw config_error(where(key) + "expected a number");
            out = v->get<double>();
        }
    }

    template <typename Int>
    void count(const std::string& key, Int& out) {
        if (auto* v = find(key)) {
            if (!v->is_number_unsigned()) throw config_error(where(key) + "expected a non-negative integer");
            out = v->get<Int>();
        }
    }

    void integer(const std::string& key, int& out) {
        if (auto* v = find(key)) {
            if (!v->is_number_integer()) throw config_error(where(key) + "expected an integer");
            out = v->get<int>();
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (auto* v = find(key)) {
            if (!v->is_boolean()) throw config_error(where(key) + "expected true or false");
            out = v->get<bool>();
        }
    }

    void string(const std::string& key, std::string& out) {
        if (auto* v = find(key)) {
            if (!v->is_string()) throw config_error(where(key) + "expected a string");
            out = v->get<std::string>();
        }
    }

    template <typename Parse, typename T>
    void named(const std::string& key, T& out, Parse parse) {
        std::string name;
        if (find(key) == nullptr) return;
        string(key, name);
        try {
            out = parse(name);
        } catch (const std::exception& e) {
            throw config_error(where(key) + e.what());
        }
    }

    template <typename Parse, typename T>
    void named_list(const std::string& key, std::vector<T>& out, Parse parse) {
        auto* v = find(key);
        if (v == nullptr) return;
        if (!v->is_array()) throw config_error(where(key) + "expected a list of names");
        out.clear();
        for (const auto& item : *v) {
            if (!item.is_string()) throw config_error(where(key) + "expected a list of names");
            try {
                out.push_back(parse(item.get<std::string>()));
            } catch (const std::exception& e) {
                throw config_error(where(key) + e.what());
            }
        }
    }

    void number_list(const std::string& key, std::vector<double>& out) {
        auto* v = find(key);
        if (v == nullptr) return;
        if (!v->is_array()) throw config_error(where(key) + "expected a list of numbers");
        out.clear();
        for (const auto& item : *v) {
            if (!item.is_number()) throw config_error(where(key) + "expected a list of numbers");
            out.push_back(item.get<double>());
        }
    }

    /// Throws on the first key that was never asked for.
    void finish() const {
        for (const auto& [key, value] : obj_.items()) {
            if (!seen_.contains(key)) throw config_error(where(key) + "unknown key");
        }
    }

    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    std::string where(const std::string& key = {}) const {
        const std::string p = key.empty() ? path_ : child(key);
        return "config: " + (p.empty() ? std::string() : p + ": ");
    }

    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base.empty()) return base / path;
    return path;
}

}  // namespace

RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    Section top(doc, "");
    top.count("seed", cfg.seed);
    if (auto* v = top.find("output")) {
        if (!v->is_string()) throw config_error("config: output: expected a string");
        cfg.output = resolve(base_dir, v->get<std::string>());
    }
    top.count("jobs", cfg.jobs);

    if (auto* v = top.find("generator")) {
        Section s(*v, "generator");
        auto& p = cfg.generator;
        s.count("n", p.n);
        s.number("k_mean", p.k_mean);
        s.count("k_min", p.k_min);
        s.count("k_max", p.k_max);
        s.number("tau_degree", p.tau_degree);
        s.number("tau_community", p.tau_community);
        s.count("c_min", p.c_min);
        s.count("c_max", p.c_max);
        s.number("mu_topo", p.mu_topo);
        s.number("mu_w", p.mu_w);
        s.number("beta", p.beta);
        s.integer("weight_sweeps", p.weight_sweeps);
        s.integer("max_retries", p.max_retries);
        s.count("instances", cfg.instances);
        s.finish();
    }

    if (auto* v = top.find("networks")) {
        if (!v->is_array()) throw config_error("config: networks: expected a list");
        for (std::size_t i = 0; i < v->size(); ++i) {
            Section s((*v)[i], "networks[" + std::to_string(i) + "]");
            NetworkSource src;
            std::string edges, comm;
            s.string("id", src.id);
            s.string("edges", edges);
            s.string("communities", comm);
            s.boolean("merge_reverse_duplicates", src.merge_reverse_duplicates);
            s.finish();
            if (edges.empty()) throw config_error("config: " + s.child("edges") + ": required");
            src.edges = resolve(base_dir, edges);
            if (!comm.empty()) src.communities = resolve(base_dir, comm);
            if (src.id.empty()) src.id = src.edges.stem().string();
            cfg.networks.push_back(std::move(src));
        }
    }

    if (auto* v = top.find("centrality")) {
        Section s(*v, "centrality");
        s.named("distance", cfg.centrality.distance, parse_distance_mode);
        s.number("damping", cfg.centrality.damping);
        s.number("hss_threshold", cfg.hss_threshold);
        s.finish();
    }

    if (auto* v = top.find("init")) {
        Section s(*v, "init");
        s.number("eps_low", cfg.init.eps_low);
        s.number("eps_high", cfg.init.eps_high);
        s.finish();
    }

    if (auto* v = top.find("schedule")) {
        Section s(*v, "schedule");
        s.number("final_value", cfg.schedule.final_value);
        s.number("start_value", cfg.schedule.start_value);
        s.integer("periods", cfg.schedule.periods);
        s.number("increment", cfg.schedule.increment);
        s.finish();
    }

    if (auto* v = top.find("simulation")) {
        Section s(*v, "simulation");
        s.count("max_steps", cfg.sim.max_steps);
        s.number("conv_tol", cfg.sim.conv_tol);
        s.count("snapshot_interval", cfg.sim.snapshot_interval);
        s.boolean("include_self", cfg.sim.include_self);
        s.number("near_tol", cfg.sim.near_tol);
        s.count("histogram_bins", cfg.histogram_bins);
        s.finish();
    }

    if (auto* v = top.find("sweep")) {
        Section s(*v, "sweep");
        s.named_list("strategies", cfg.strategies, parse_schedule_kind);
        s.named_list("measures", cfg.measures, parse_measure);
        s.number_list("fractions", cfg.fractions);
        s.count("runs_per_cell", cfg.runs_per_cell);
        s.boolean("snapshots", cfg.write_snapshots);
        s.finish();
    }

    if (auto* v = top.find("simulate")) {
        Section s(*v, "simulate");
        s.named("strategy", cfg.strategy, parse_schedule_kind);
        s.named("measure", cfg.measure, parse_measure);
        s.number("fraction", cfg.fraction);
        s.count("run_index", cfg.run_index);
        s.finish();
    }
    top.finish();

    try {
        cfg.generator.validate();
        cfg.init.validate();
        cfg.sim.validate();
        cfg.schedule.validate();
        Schedule stepped = cfg.schedule;
        stepped.kind = ScheduleKind::stepped;
        stepped.validate();
    } catch (const std::exception& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    if (!(cfg.hss_threshold > 0.0 && cfg.hss_threshold <= 1.0)) {
        throw config_error("config: centrality.hss_threshold: must lie in (0,1]");
    }
    if (!(cfg.fraction > 0.0 && cfg.fraction <= 1.0)) throw config_error("config: simulate.fraction: must lie in (0,1]");
    if (cfg.histogram_bins < 1) throw config_error("config: simulation.histogram_bins: must be at least 1");
    if (cfg.instances < 1) throw config_error("config: generator.instances: must be at least 1");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error("config: " + path.string() + ": " + e.what());
    }
    return parse_config(doc, path.parent_path());
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["seed"] = cfg.seed;
    j["output"] = cfg.output.string();
    j["jobs"] = cfg.jobs;
    const auto& p = cfg.generator;
    j["generator"] = {{"n", p.n},
                      {"k_mean", p.k_mean},
                      {"k_min", p.k_min},
                      {"k_max", p.k_max},
                      {"tau_degree", p.tau_degree},
                      {"tau_community", p.tau_community},
                      {"c_min", p.c_min},
                      {"c_max", p.c_max},
                      {"mu_topo", p.mu_topo},
                      {"mu_w", p.mu_w},
                      {"beta", p.beta},
                      {"weight_sweeps", p.weight_sweeps},
                      {"max_retries", p.max_retries},
                      {"instances", cfg.instances}};
    auto nets = nlohmann::ordered_json::array();
    for (const auto& n : cfg.networks) {
        nlohmann::ordered_json e;
        e["id"] = n.id;
        e["edges"] = n.edges.string();
        if (!n.communities.empty()) e["communities"] = n.communities.string();
        e["merge_reverse_duplicates"] = n.merge_reverse_duplicates;
        nets.push_back(e);
    }
    j["networks"] = nets;
    j["centrality"] = {{"distance", std::string(to_string(cfg.centrality.distance))},
                       {"damping", cfg.centrality.damping},
                       {"hss_threshold", cfg.hss_threshold}};
    j["init"] = {{"eps_low", cfg.init.eps_low}, {"eps_high", cfg.init.eps_high}};
    j["schedule"] = {{"final_value", cfg.schedule.final_value},
                     {"start_value", cfg.schedule.start_value},
                     {"periods", cfg.schedule.periods},
                     {"increment", cfg.schedule.increment}};
    j["simulation"] = {{"max_steps", cfg.sim.max_steps},
                       {"conv_tol", cfg.sim.conv_tol},
                       {"snapshot_interval", cfg.sim.snapshot_interval},
                       {"include_self", cfg.sim.include_self},
                       {"near_tol", cfg.sim.near_tol},
                       {"histogram_bins", cfg.histogram_bins}};
    auto names = [](const auto& xs) {
        auto arr = nlohmann::ordered_json::array();
        for (auto x : xs) arr.push_back(std::string(to_string(x)));
        return arr;
    };
    j["sweep"] = {{"strategies", names(cfg.strategies)},
                  {"measures", names(cfg.measures)},
                  {"fractions", cfg.fractions},
                  {"runs_per_cell", cfg.runs_per_cell},
                  {"snapshots", cfg.write_snapshots}};
    j["simulate"] = {{"strategy", std::string(to_string(cfg.strategy))},
                     {"measure", std::string(to_string(cfg.measure))},
                     {"fraction", cfg.fraction},
                     {"run_index", cfg.run_index}};
    return j;
}

std::vector<NetworkSource> network_sources(const RunConfig& cfg) {
    if (!cfg.networks.empty()) return cfg.networks;
    return generated_networks(cfg.generator, cfg.instances, cfg.seed);
}

SweepSpec make_sweep_spec(const RunConfig& cfg) {
    SweepSpec spec;
    spec.networks = network_sources(cfg);
    spec.strategies = cfg.strategies;
    spec.measures = cfg.measures;
    spec.fractions = cfg.fractions;
    spec.runs_per_cell = cfg.runs_per_cell;
    spec.master_seed = cfg.seed;
    spec.schedule = cfg.schedule;
    spec.init = cfg.init;
    spec.sim = cfg.sim;
    spec.centrality = cfg.centrality;
    spec.histogram_bins = cfg.histogram_bins;
    return spec;
}

}  // namespace hksim
