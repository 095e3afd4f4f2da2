#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hksim/commands.hpp"
#include "hksim/graph_io.hpp"

namespace {

using namespace hksim;

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> jobs;

    std::optional<std::size_t> n, k_min, k_max, c_min, c_max, instances;
    std::optional<double> k_mean, mu_topo, mu_w;

    std::optional<std::string> edges, communities, hss, distance;
    bool merge_reverse = false;

    std::optional<std::string> strategy, measure;
    std::optional<double> fraction;
    std::optional<std::size_t> run_index, runs, max_steps;
    bool include_self = false;
    bool snapshots = false;

    std::string runs_csv;
};

RunConfig build_config(const Overrides& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (o.out) cfg.output = *o.out;
    if (o.jobs) cfg.jobs = *o.jobs;
    auto& p = cfg.generator;
    if (o.n) p.n = *o.n;
    if (o.k_min) p.k_min = *o.k_min;
    if (o.k_max) p.k_max = *o.k_max;
    if (o.k_mean) p.k_mean = *o.k_mean;
    if (o.c_min) p.c_min = *o.c_min;
    if (o.c_max) p.c_max = *o.c_max;
    if (o.mu_topo) p.mu_topo = *o.mu_topo;
    if (o.mu_w) p.mu_w = *o.mu_w;
    if (o.instances) cfg.instances = *o.instances;
    if (o.distance) cfg.centrality.distance = parse_distance_mode(*o.distance);
    if (o.strategy) cfg.strategy = parse_schedule_kind(*o.strategy);
    if (o.measure) cfg.measure = parse_measure(*o.measure);
    if (o.fraction) cfg.fraction = *o.fraction;
    if (o.run_index) cfg.run_index = *o.run_index;
    if (o.runs) cfg.runs_per_cell = *o.runs;
    if (o.max_steps) cfg.sim.max_steps = *o.max_steps;
    if (o.include_self) cfg.sim.include_self = true;
    if (o.snapshots) cfg.write_snapshots = true;
    if (o.edges) {
        NetworkSource src;
        src.edges = *o.edges;
        src.id = src.edges.stem().string();
        if (o.communities) src.communities = *o.communities;
        src.merge_reverse_duplicates = o.merge_reverse;
        cfg.networks = {src};
    }
    return cfg;
}

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "master seed");
}

void add_generator(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--n", o.n, "number of nodes");
    cmd->add_option("--kmean", o.k_mean, "mean degree");
    cmd->add_option("--kmin", o.k_min, "minimum degree");
    cmd->add_option("--kmax", o.k_max, "maximum degree");
    cmd->add_option("--cmin", o.c_min, "minimum community size");
    cmd->add_option("--cmax", o.c_max, "maximum community size");
    cmd->add_option("--mu", o.mu_topo, "topological mixing");
    cmd->add_option("--muw", o.mu_w, "weight mixing");
    cmd->add_option("--instances", o.instances, "number of generated networks");
}

void add_network(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--edges", o.edges, "edge-list file")->check(CLI::ExistingFile);
    cmd->add_option("--communities", o.communities, "community file")->check(CLI::ExistingFile);
    cmd->add_flag("--merge-reverse", o.merge_reverse, "accept each edge listed in both directions");
    cmd->add_option("--distance", o.distance, "hop or reciprocal");
}

void add_dynamics(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--max-steps", o.max_steps, "step budget per run");
    cmd->add_flag("--include-self", o.include_self, "count each agent in its own interaction set");
}

std::string one_line(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded-confidence opinion dynamics with stubborn agents"};
    app.require_subcommand(1);
    Overrides o;

    auto* gen = app.add_subcommand("generate", "generate LFR-style weighted networks");
    add_common(gen, o);
    add_generator(gen, o);
    gen->add_option("--out", o.out, "output directory");

    auto* cen = app.add_subcommand("centrality", "per-node centrality table and High-Salience Skeleton");
    add_common(cen, o);
    add_network(cen, o);
    add_generator(cen, o);
    std::optional<std::string> cen_out;
    cen->add_option("--out", cen_out, "CSV path (stdout if omitted)");
    cen->add_option("--hss", o.hss, "write the skeleton edge list here");

    auto* sim = app.add_subcommand("simulate", "one run with stubborn agents");
    add_common(sim, o);
    add_network(sim, o);
    add_generator(sim, o);
    add_dynamics(sim, o);
    sim->add_option("--strategy", o.strategy, "static or dynamic");
    sim->add_option("--measure", o.measure, "selection measure, random or none");
    sim->add_option("--fraction", o.fraction, "stubborn fraction");
    sim->add_option("--run-index", o.run_index, "run index within the cell");
    sim->add_option("--out", o.out, "output directory");

    auto* swp = app.add_subcommand("sweep", "full experiment grid");
    add_common(swp, o);
    add_network(swp, o);
    add_generator(swp, o);
    add_dynamics(swp, o);
    swp->add_option("--runs", o.runs, "runs per cell");
    swp->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    swp->add_flag("--snapshots", o.snapshots, "write opinion histograms per run");
    swp->add_option("--out", o.out, "output directory");

    auto* rep = app.add_subcommand("report", "re-aggregate an existing runs.csv");
    rep->add_option("--runs", o.runs_csv, "runs.csv to read")->required()->check(CLI::ExistingFile);
    std::optional<std::string> rep_out;
    rep->add_option("--out", rep_out, "aggregates CSV path (default: next to runs.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << one_line(e.what()) << '\n';
        return 2;
    }

    try {
        if (rep->parsed()) {
            const std::filesystem::path runs = o.runs_csv;
            cmd_report(runs, rep_out ? std::filesystem::path(*rep_out) : runs.parent_path() / "aggregates.csv",
                       std::cerr);
            return 0;
        }
        const RunConfig cfg = build_config(o);
        if (gen->parsed()) {
            cmd_generate(cfg, cfg.output, std::cerr);
        } else if (cen->parsed()) {
            const auto sources = network_sources(cfg);
            if (sources.empty()) throw config_error("no network configured");
            std::optional<std::filesystem::path> hss;
            if (o.hss) hss = *o.hss;
            if (cen_out) {
                std::filesystem::path path = *cen_out;
                if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
                std::ofstream out(path);
                if (!out) throw io_error("cannot open " + path.string() + " for writing");
                cmd_centrality(cfg, sources.front(), out, hss, std::cerr);
                out.flush();
                if (!out) throw io_error("write to " + path.string() + " failed");
            } else {
                cmd_centrality(cfg, sources.front(), std::cout, hss, std::cerr);
            }
        } else if (sim->parsed()) {
            cmd_simulate(cfg, std::nullopt, cfg.output, std::cerr);
        } else if (swp->parsed()) {
            const auto failed = cmd_sweep(cfg, std::cerr);
            if (failed > 0) {
                std::cerr << "error: " << failed << " job(s) failed\n";
                return 1;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << one_line(e.what()) << '\n';
        return 1;
    }
    return 0;
}
