#include "hksim/commands.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hksim/format.hpp"
#include "hksim/graph_io.hpp"
#include "hksim/metrics.hpp"
#include "hksim/network_stats.hpp"

namespace hksim {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path.string() + " for writing");
    return out;
}

void close_output(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw io_error("write to " + path.string() + " failed");
}

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn fn) {
    auto out = open_output(path);
    fn(out);
    close_output(out, path);
}

std::string stats_line(const std::string& id, const WeightedGraph& g) {
    auto s = network_stats(g);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: N=%zu |E|=%zu k_min=%zu k_max=%zu <k>=%.2f A=%.3f C=%.3f alpha_k=%.2f alpha_w=%.2f",
                  id.c_str(), g.node_count(), s.edge_count, s.k_min, s.k_max, s.k_mean, s.assortativity, s.clustering,
                  s.alpha_k, s.alpha_w);
    std::string line = buf;
    if (g.has_communities()) {
        std::snprintf(buf, sizeof buf, " Q=%.3f", modularity(g));
        line += buf;
    }
    return line;
}

}  // namespace

void cmd_generate(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
    std::filesystem::create_directories(out_dir);
    for (const auto& src : generated_networks(cfg.generator, cfg.instances, cfg.seed)) {
        auto g = load_network(src);
        const auto edges = out_dir / (src.id + ".edges");
        const auto comms = out_dir / (src.id + ".communities");
        save_edge_list(g, edges);
        save_communities(g, comms);
        log << stats_line(src.id, g) << '\n';
    }
}

void cmd_centrality(const RunConfig& cfg, const NetworkSource& network, std::ostream& csv,
                    const std::optional<std::filesystem::path>& hss_path, std::ostream& log) {
    const auto g = load_network(network);
    std::vector<NodeScores> tables;
    for (auto m : all_centralities) {
        if (m == Measure::salience) continue;
        tables.push_back(compute_scores(g, m, cfg.centrality));
    }
    const auto es = edge_salience(g, cfg.centrality.distance);
    tables.push_back(node_salience(g, es));
    const auto hss = high_salience_skeleton(g, es, cfg.hss_threshold);
    NodeScores hss_degree{"hss_degree", std::vector<double>(g.node_count(), 0.0)};
    {
        // The skeleton renumbers nodes; map back through labels.
        std::unordered_map<std::int64_t, node_id> by_label;
        for (node_id i = 0; i < g.node_count(); ++i) by_label.emplace(g.label(i), i);
        for (node_id i = 0; i < hss.node_count(); ++i) {
            hss_degree.values[by_label.at(hss.label(i))] = static_cast<double>(hss.degree(i));
        }
    }
    tables.push_back(std::move(hss_degree));

    csv << "node,measure,value\n";
    for (const auto& t : tables) {
        for (node_id i = 0; i < g.node_count(); ++i) {
            csv << g.label(i) << ',' << t.measure << ',' << format_double(t.values[i]) << '\n';
        }
    }
    if (hss_path) save_edge_list(hss, *hss_path);
    log << network.id << ": " << g.node_count() << " nodes, " << g.edge_count() << " edges; skeleton keeps "
        << hss.node_count() << " nodes and " << hss.edge_count() << " edges at threshold "
        << format_double(cfg.hss_threshold) << '\n';
}

void cmd_simulate(const RunConfig& cfg, const std::optional<NetworkSource>& network,
                  const std::filesystem::path& out_dir, std::ostream& log) {
    SweepSpec spec = make_sweep_spec(cfg);
    if (network) spec.networks = {*network};
    spec.networks.resize(1);
    spec.strategies = {cfg.strategy};
    spec.measures = {cfg.measure};
    spec.fractions = {cfg.fraction};
    spec.runs_per_cell = cfg.run_index + 1;
    spec.validate();

    Job job;
    job.network = 0;
    job.strategy = cfg.strategy;
    job.measure = cfg.measure;
    job.fraction = cfg.fraction;
    job.run_index = cfg.run_index;
    job.seed = job_seed(spec.master_seed, spec.networks[0].id, job.strategy, job.measure, job.fraction, job.run_index);

    const auto g = load_network(spec.networks[0]);
    const auto scores = compute_scores(g, job.measure, spec.centrality);
    const auto result = run_job(spec, job, g, scores);
    const auto record = make_record(spec, job, result);

    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "runs.csv", [&](std::ostream& out) { write_runs_csv(out, std::span(&record, 1)); });
    write_file(out_dir / "run.json", [&](std::ostream& out) { out << sim_result_json(result) << '\n'; });
    write_file(out_dir / "series.csv", [&](std::ostream& out) {
        out << "step,mean,fraction_near\n";
        for (std::size_t t = 0; t < result.series.size(); ++t) {
            out << t << ',' << format_double(result.series[t].mean) << ','
                << format_double(result.series[t].fraction_near) << '\n';
        }
    });
    if (spec.sim.snapshot_interval > 0) {
        write_file(out_dir / "snapshots.csv",
                   [&](std::ostream& out) { write_snapshot_csv(out, result, spec.histogram_bins); });
    }
    log << record.network_id << ' ' << record.strategy << ' ' << record.measure << " f=" << format_double(record.fraction)
        << " run=" << record.run_index << ": final_mean=" << format_double(record.final_mean)
        << " fraction_near=" << format_double(record.fraction_near) << " steps=" << record.steps
        << (record.converged_at ? " (converged)" : " (not converged)") << '\n';
}

std::size_t cmd_sweep(const RunConfig& cfg, std::ostream& log) {
    const SweepSpec spec = make_sweep_spec(cfg);
    const auto jobs = expand_sweep(spec);
    const auto& out_dir = cfg.output;
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "config.json", [&](std::ostream& out) { out << to_json(cfg).dump(2) << '\n'; });

    log << "sweep: " << jobs.size() << " jobs on " << spec.networks.size() << " network(s), " << cfg.jobs
        << " worker(s)\n";
    SweepOptions opts;
    opts.parallelism = cfg.jobs;
    if (cfg.write_snapshots) opts.snapshot_dir = out_dir / "snapshots";
    std::size_t next_report = 1;
    opts.progress = [&](std::size_t done, std::size_t total) {
        if (done * 10 >= next_report * total) {
            log << "  " << done << "/" << total << " jobs done\n" << std::flush;
            while (done * 10 >= next_report * total) ++next_report;
        }
    };
    const auto result = run_sweep(spec, opts);
    const auto rows = aggregate(result.records);

    write_file(out_dir / "runs.csv", [&](std::ostream& out) { write_runs_csv(out, result.records); });
    write_file(out_dir / "aggregates.csv", [&](std::ostream& out) { write_aggregates_csv(out, rows); });
    write_file(out_dir / "summary.json", [&](std::ostream& out) {
        nlohmann::ordered_json j;
        j["jobs"] = jobs.size();
        j["completed"] = result.records.size();
        j["failed"] = result.failures.size();
        auto groups = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            groups.push_back({{"strategy", r.strategy},
                              {"measure", r.measure},
                              {"fraction", r.fraction},
                              {"n", r.n},
                              {"mean_final_mean", r.mean_final_mean},
                              {"mean_fraction_near", r.mean_fraction_near},
                              {"mean_converged_at", r.mean_converged_at ? nlohmann::ordered_json(*r.mean_converged_at)
                                                                        : nlohmann::ordered_json(nullptr)}});
        }
        j["groups"] = groups;
        out << j.dump(2) << '\n';
    });
    const auto failures_path = out_dir / "failures.csv";
    if (!result.failures.empty()) {
        write_file(failures_path, [&](std::ostream& out) {
            out << "network_id,strategy,measure,fraction,run_index,seed,error\n";
            for (const auto& f : result.failures) {
                std::string msg = f.message;
                for (char& c : msg) {
                    if (c == ',' || c == '\n') c = ';';
                }
                out << f.network_id << ',' << to_string(f.job.strategy) << ',' << to_string(f.job.measure) << ','
                    << format_double(f.job.fraction) << ',' << f.job.run_index << ',' << f.job.seed << ',' << msg
                    << '\n';
            }
        });
        log << "sweep: " << result.failures.size() << " job(s) failed, see " << failures_path.string() << '\n';
    } else {
        std::filesystem::remove(failures_path);
    }
    log << "sweep: wrote " << result.records.size() << " runs and " << rows.size() << " aggregate rows to "
        << out_dir.string() << '\n';
    return result.failures.size();
}

void cmd_report(const std::filesystem::path& runs_csv, const std::filesystem::path& out_csv, std::ostream& log) {
    std::ifstream in(runs_csv);
    if (!in) throw io_error("cannot open " + runs_csv.string() + " for reading");
    const auto records = read_runs_csv(in, runs_csv.string());
    if (records.empty()) throw std::runtime_error(runs_csv.string() + ": no rows");
    const auto rows = aggregate(records);
    write_file(out_csv, [&](std::ostream& out) { write_aggregates_csv(out, rows); });
    log << "report: " << records.size() << " runs -> " << rows.size() << " aggregate rows in " << out_csv.string()
        << '\n';
}

}  // namespace hksim
