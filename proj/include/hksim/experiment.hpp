#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hksim/centrality.hpp"
#include "hksim/dynamics.hpp"
#include "hksim/generator.hpp"
#include "hksim/graph.hpp"

namespace hksim {

class sweep_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Either generator parameters or an edge-list file (plus optional
/// community file).
struct NetworkSource {
    std::string id;
    std::optional<LfrParams> generated;
    std::filesystem::path edges;
    std::filesystem::path communities;
    bool merge_reverse_duplicates = false;
};

WeightedGraph load_network(const NetworkSource& src);

/// `instances` generated sources with ids lfr-000, lfr-001, ...; instance i
/// uses seed derive_seed(master_seed, i).
std::vector<NetworkSource> generated_networks(const LfrParams& base, std::size_t instances,
                                              std::uint64_t master_seed);

struct SweepSpec {
    std::vector<NetworkSource> networks;
    std::vector<ScheduleKind> strategies{ScheduleKind::fixed};
    std::vector<Measure> measures;
    std::vector<double> fractions{0.001, 0.002, 0.005, 0.01, 0.02};
    std::size_t runs_per_cell = 50;
    std::uint64_t master_seed = 1;
    Schedule schedule;  // kind is overridden per strategy
    InitSpec init;
    SimConfig sim;
    CentralityOptions centrality;
    std::size_t histogram_bins = 50;

    void validate() const;
};

struct Job {
    std::size_t index = 0;
    std::size_t network = 0;
    ScheduleKind strategy = ScheduleKind::fixed;
    Measure measure = Measure::random;
    double fraction = 0.0;
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
};

/// Seed of one grid cell run, hashed from the coordinate values (not their
/// positions), so a sub-grid reproduces the runs of the full grid.
std::uint64_t job_seed(std::uint64_t master_seed, const std::string& network_id, ScheduleKind strategy, Measure measure,
                       double fraction, std::size_t run_index);

/// Cartesian product network x strategy x measure x fraction x run.
std::vector<Job> expand_sweep(const SweepSpec& spec);

/// File-name-safe identifier of a job.
std::string job_id(const SweepSpec& spec, const Job& job);

struct RunRecord {
    std::string network_id;
    std::string strategy;
    std::string measure;
    double fraction = 0.0;
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
    double final_mean = 0.0;
    double fraction_near = 0.0;
    std::optional<std::size_t> converged_at;
    std::size_t steps = 0;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Stubborn selection plus simulation for one job on a prepared network.
/// `scores` must hold the job's measure (ignored for random/none).
SimResult run_job(const SweepSpec& spec, const Job& job, const WeightedGraph& g, const NodeScores& scores);

RunRecord make_record(const SweepSpec& spec, const Job& job, const SimResult& result);

struct JobFailure {
    Job job;
    std::string network_id;
    std::string message;
};

struct SweepOptions {
    std::size_t parallelism = 1;
    /// When set, snapshots/<job-id>.csv histograms are written here.
    std::optional<std::filesystem::path> snapshot_dir;
    bool keep_final_opinions = false;
    std::function<void(std::size_t done, std::size_t total)> progress;
};

struct SweepResult {
    std::vector<RunRecord> records;                  // job order, failures omitted
    std::vector<std::vector<double>> final_opinions;  // parallel to records when kept
    std::vector<JobFailure> failures;
};

/// Prepares every network and its centralities once, then runs all jobs on
/// a bounded worker pool. The output does not depend on `parallelism`.
SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

struct AggregateRow {
    std::string strategy;
    std::string measure;
    double fraction = 0.0;
    double mean_final_mean = 0.0;
    double std_final_mean = 0.0;
    double mean_fraction_near = 0.0;
    double std_fraction_near = 0.0;
    std::size_t n = 0;
    std::optional<double> mean_converged_at;  // over converged runs only
};

/// Groups by (strategy, measure, fraction) across networks and runs, sorted
/// by that key. Standard deviations are sample (n-1) deviations, 0 for n=1.
std::vector<AggregateRow> aggregate(std::span<const RunRecord> records);

void write_runs_csv(std::ostream& out, std::span<const RunRecord> records);
std::vector<RunRecord> read_runs_csv(std::istream& in, const std::string& source_name);
void write_aggregates_csv(std::ostream& out, std::span<const AggregateRow> rows);
/// step,bin_0..bin_{B-1} with per-snapshot counts.
void write_snapshot_csv(std::ostream& out, const SimResult& result, std::size_t bins);

}  // namespace hksim
