#include "hksim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "hksim/format.hpp"
#include "hksim/graph_io.hpp"
#include "hksim/metrics.hpp"

namespace hksim {

namespace {

constexpr const char* runs_header =
    "network_id,strategy,measure,fraction,run_index,seed,final_mean,fraction_near,converged_at,steps";
constexpr const char* aggregates_header =
    "strategy,measure,fraction,mean_final_mean,std_final_mean,mean_fraction_near,std_fraction_near,n";

/// Runs fn(0..count-1) on up to `parallelism` threads. The first exception
/// thrown by any call is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t parallelism, Fn fn) {
    const std::size_t workers = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

double sample_std(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

}  // namespace

WeightedGraph load_network(const NetworkSource& src) {
    if (src.generated) return generate_lfr(*src.generated);
    auto g = load_edge_list(src.edges, EdgeListOptions{src.merge_reverse_duplicates});
    if (!src.communities.empty()) g = load_communities(src.communities, g);
    return g;
}

std::vector<NetworkSource> generated_networks(const LfrParams& base, std::size_t instances,
                                              std::uint64_t master_seed) {
    std::vector<NetworkSource> out;
    for (std::size_t i = 0; i < instances; ++i) {
        NetworkSource src;
        char id[32];
        std::snprintf(id, sizeof id, "lfr-%03zu", i);
        src.id = id;
        src.generated = base;
        src.generated->seed = derive_seed(master_seed, static_cast<std::uint64_t>(i));
        out.push_back(std::move(src));
    }
    return out;
}

void SweepSpec::validate() const {
    if (networks.empty()) throw sweep_error("sweep has no networks");
    if (strategies.empty()) throw sweep_error("sweep has no strategies");
    if (measures.empty()) throw sweep_error("sweep has no measures");
    if (fractions.empty()) throw sweep_error("sweep has no fractions");
    if (runs_per_cell < 1) throw sweep_error("runs_per_cell must be at least 1");
    if (histogram_bins < 1) throw sweep_error("histogram_bins must be at least 1");
    for (double f : fractions) {
        if (!(f > 0.0 && f <= 1.0)) throw sweep_error("fraction " + format_double(f) + " outside (0,1]");
    }
    std::vector<std::string> ids;
    for (const auto& n : networks) {
        if (n.id.empty()) throw sweep_error("network with an empty id");
        if (n.id.find_first_of(",\n\"/\\ ") != std::string::npos) {
            throw sweep_error("network id '" + n.id + "' may not contain commas, quotes, slashes or spaces");
        }
        if (!n.generated && n.edges.empty()) throw sweep_error("network '" + n.id + "' has neither generator nor file");
        ids.push_back(n.id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw sweep_error("duplicate network ids");
    init.validate();
    sim.validate();
    for (auto kind : strategies) {
        Schedule s = schedule;
        s.kind = kind;
        s.validate();
    }
}

std::uint64_t job_seed(std::uint64_t master_seed, const std::string& network_id, ScheduleKind strategy, Measure measure,
                       double fraction, std::size_t run_index) {
    std::string key = network_id;
    key += '|';
    key += to_string(strategy);
    key += '|';
    key += to_string(measure);
    key += '|';
    key += format_double(fraction);
    key += '|';
    key += std::to_string(run_index);
    return derive_seed(master_seed, std::string_view(key));
}

std::vector<Job> expand_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<Job> jobs;
    jobs.reserve(spec.networks.size() * spec.strategies.size() * spec.measures.size() * spec.fractions.size() *
                 spec.runs_per_cell);
    for (std::size_t net = 0; net < spec.networks.size(); ++net) {
        for (auto strategy : spec.strategies) {
            for (auto measure : spec.measures) {
                for (double f : spec.fractions) {
                    for (std::size_t run = 0; run < spec.runs_per_cell; ++run) {
                        Job j;
                        j.index = jobs.size();
                        j.network = net;
                        j.strategy = strategy;
                        j.measure = measure;
                        j.fraction = f;
                        j.run_index = run;
                        j.seed = job_seed(spec.master_seed, spec.networks[net].id, strategy, measure, f, run);
                        jobs.push_back(j);
                    }
                }
            }
        }
    }
    return jobs;
}

std::string job_id(const SweepSpec& spec, const Job& job) {
    return spec.networks.at(job.network).id + "_" + std::string(to_string(job.strategy)) + "_" +
           std::string(to_string(job.measure)) + "_f" + format_double(job.fraction) + "_r" +
           std::to_string(job.run_index);
}

SimResult run_job(const SweepSpec& spec, const Job& job, const WeightedGraph& g, const NodeScores& scores) {
    StubbornPlan plan;
    plan.schedule = spec.schedule;
    plan.schedule.kind = job.strategy;
    Rng select_rng(derive_seed(job.seed, std::string_view("stubborn")));
    if (job.measure == Measure::random || job.measure == Measure::none) {
        plan.stubborn = rank_top_fraction(NodeScores{std::string(to_string(job.measure)), {}}, job.fraction, select_rng,
                                          g.node_count());
    } else {
        plan.stubborn = rank_top_fraction(scores, job.fraction, select_rng, g.node_count());
    }
    return run_simulation(g, spec.init, plan, spec.sim, job.seed);
}

RunRecord make_record(const SweepSpec& spec, const Job& job, const SimResult& result) {
    RunRecord r;
    r.network_id = spec.networks.at(job.network).id;
    r.strategy = std::string(to_string(job.strategy));
    r.measure = std::string(to_string(job.measure));
    r.fraction = job.fraction;
    r.run_index = job.run_index;
    r.seed = job.seed;
    r.final_mean = mean_opinion(result.final_opinions);
    r.fraction_near = fraction_near(result.final_opinions, spec.schedule.final_value, spec.sim.near_tol);
    r.converged_at = result.converged_at;
    r.steps = result.steps;
    return r;
}

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options) {
    const auto jobs = expand_sweep(spec);
    const std::size_t nnet = spec.networks.size();

    std::vector<WeightedGraph> graphs(nnet);
    std::vector<std::string> network_error(nnet);
    parallel_for(nnet, options.parallelism, [&](std::size_t i) {
        try {
            graphs[i] = load_network(spec.networks[i]);
        } catch (const std::exception& e) {
            network_error[i] = e.what();
        }
    });

    // Centralities once per (network, measure).
    std::vector<Measure> scored;
    for (auto m : spec.measures) {
        if (m != Measure::random && m != Measure::none && std::find(scored.begin(), scored.end(), m) == scored.end()) {
            scored.push_back(m);
        }
    }
    std::vector<NodeScores> scores(nnet * scored.size());
    std::vector<std::string> score_error(scores.size());
    parallel_for(scores.size(), options.parallelism, [&](std::size_t k) {
        const std::size_t net = k / scored.size();
        if (!network_error[net].empty()) return;
        try {
            scores[k] = compute_scores(graphs[net], scored[k % scored.size()], spec.centrality);
        } catch (const std::exception& e) {
            score_error[k] = e.what();
        }
    });
    const NodeScores no_scores;
    auto scores_for = [&](const Job& j) -> std::pair<const NodeScores*, const std::string*> {
        auto it = std::find(scored.begin(), scored.end(), j.measure);
        if (it == scored.end()) return {&no_scores, nullptr};
        const std::size_t k = j.network * scored.size() + static_cast<std::size_t>(it - scored.begin());
        return {&scores[k], score_error[k].empty() ? nullptr : &score_error[k]};
    };

    if (options.snapshot_dir) std::filesystem::create_directories(*options.snapshot_dir);

    std::vector<std::optional<RunRecord>> records(jobs.size());
    std::vector<std::vector<double>> finals(options.keep_final_opinions ? jobs.size() : 0);
    std::vector<std::string> job_error(jobs.size());
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    parallel_for(jobs.size(), options.parallelism, [&](std::size_t idx) {
        const Job& job = jobs[idx];
        try {
            if (!network_error[job.network].empty()) throw sweep_error(network_error[job.network]);
            auto [sc, err] = scores_for(job);
            if (err) throw sweep_error(*err);
            auto result = run_job(spec, job, graphs[job.network], *sc);
            records[idx] = make_record(spec, job, result);
            if (options.snapshot_dir) {
                const auto path = *options.snapshot_dir / (job_id(spec, job) + ".csv");
                std::ofstream out(path);
                if (!out) throw io_error("cannot open " + path.string() + " for writing");
                write_snapshot_csv(out, result, spec.histogram_bins);
                if (!out) throw io_error("write to " + path.string() + " failed");
            }
            if (options.keep_final_opinions) finals[idx] = std::move(result.final_opinions);
        } catch (const std::exception& e) {
            job_error[idx] = e.what();
        }
        const std::size_t now = ++done;
        if (options.progress) {
            std::lock_guard lock(progress_mutex);
            options.progress(now, jobs.size());
        }
    });

    SweepResult out;
    for (std::size_t idx = 0; idx < jobs.size(); ++idx) {
        if (records[idx]) {
            out.records.push_back(std::move(*records[idx]));
            if (options.keep_final_opinions) out.final_opinions.push_back(std::move(finals[idx]));
        } else {
            out.failures.push_back({jobs[idx], spec.networks[jobs[idx].network].id, job_error[idx]});
        }
    }
    return out;
}

std::vector<AggregateRow> aggregate(std::span<const RunRecord> records) {
    struct Acc {
        std::vector<double> means, nears, conv;
    };
    std::map<std::tuple<std::string, std::string, double>, Acc> groups;
    for (const auto& r : records) {
        auto& acc = groups[{r.strategy, r.measure, r.fraction}];
        acc.means.push_back(r.final_mean);
        acc.nears.push_back(r.fraction_near);
        if (r.converged_at) acc.conv.push_back(static_cast<double>(*r.converged_at));
    }
    std::vector<AggregateRow> rows;
    rows.reserve(groups.size());
    for (const auto& [key, acc] : groups) {
        AggregateRow row;
        std::tie(row.strategy, row.measure, row.fraction) = key;
        row.n = acc.means.size();
        row.mean_final_mean = mean_opinion(acc.means);
        row.std_final_mean = sample_std(acc.means, row.mean_final_mean);
        row.mean_fraction_near = mean_opinion(acc.nears);
        row.std_fraction_near = sample_std(acc.nears, row.mean_fraction_near);
        if (!acc.conv.empty()) row.mean_converged_at = mean_opinion(acc.conv);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_runs_csv(std::ostream& out, std::span<const RunRecord> records) {
    out << runs_header << '\n';
    for (const auto& r : records) {
        out << r.network_id << ',' << r.strategy << ',' << r.measure << ',' << format_double(r.fraction) << ','
            << r.run_index << ',' << r.seed << ',' << format_double(r.final_mean) << ','
            << format_double(r.fraction_near) << ',';
        if (r.converged_at) out << *r.converged_at;
        out << ',' << r.steps << '\n';
    }
}

std::vector<RunRecord> read_runs_csv(std::istream& in, const std::string& source_name) {
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) -> std::runtime_error {
        return std::runtime_error(source_name + ":" + std::to_string(line_no) + ": " + what);
    };
    if (!std::getline(in, line)) {
        throw std::runtime_error(source_name + ": empty file, expected header " + runs_header);
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != runs_header) throw fail("unexpected header, expected " + std::string(runs_header));

    std::vector<RunRecord> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 10) throw fail("expected 10 fields, found " + std::to_string(f.size()));
        RunRecord r;
        r.network_id = f[0];
        r.strategy = f[1];
        r.measure = f[2];
        auto num = [&](const std::string& s, const char* name) {
            auto v = parse_double(s);
            if (!v) throw fail(std::string("bad ") + name + " '" + s + "'");
            return *v;
        };
        auto count = [&](const std::string& s, const char* name) {
            auto v = parse_integer(s);
            if (!v || *v < 0) throw fail(std::string("bad ") + name + " '" + s + "'");
            return static_cast<std::size_t>(*v);
        };
        r.fraction = num(f[3], "fraction");
        r.run_index = count(f[4], "run_index");
        try {
            std::size_t used = 0;
            r.seed = std::stoull(f[5], &used);
            if (used != f[5].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw fail("bad seed '" + f[5] + "'");
        }
        r.final_mean = num(f[6], "final_mean");
        r.fraction_near = num(f[7], "fraction_near");
        if (!f[8].empty()) r.converged_at = count(f[8], "converged_at");
        r.steps = count(f[9], "steps");
        out.push_back(std::move(r));
    }
    return out;
}

void write_aggregates_csv(std::ostream& out, std::span<const AggregateRow> rows) {
    out << aggregates_header << '\n';
    for (const auto& r : rows) {
        out << r.strategy << ',' << r.measure << ',' << format_double(r.fraction) << ','
            << format_double(r.mean_final_mean) << ',' << format_double(r.std_final_mean) << ','
            << format_double(r.mean_fraction_near) << ',' << format_double(r.std_fraction_near) << ',' << r.n << '\n';
    }
}

void write_snapshot_csv(std::ostream& out, const SimResult& result, std::size_t bins) {
    out << "step";
    for (std::size_t b = 0; b < bins; ++b) out << ",bin_" << b;
    out << '\n';
    for (const auto& snap : result.snapshots) {
        out << snap.step;
        for (auto c : histogram(snap.opinions, bins)) out << ',' << c;
        out << '\n';
    }
}

}  // namespace hksim
