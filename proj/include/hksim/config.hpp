#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hksim/centrality.hpp"
#include "hksim/dynamics.hpp"
#include "hksim/experiment.hpp"
#include "hksim/generator.hpp"

namespace hksim {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a command needs. Missing keys keep these defaults; unknown
/// keys are rejected.
struct RunConfig {
    std::uint64_t seed = 1;
    std::filesystem::path output = "out";
    std::size_t jobs = 1;

    LfrParams generator;
    std::size_t instances = 1;
    /// File networks; when non-empty they replace generated instances.
    std::vector<NetworkSource> networks;

    CentralityOptions centrality;
    double hss_threshold = 0.9;

    InitSpec init;
    Schedule schedule;
    SimConfig sim;
    std::size_t histogram_bins = 50;

    std::vector<ScheduleKind> strategies{ScheduleKind::fixed, ScheduleKind::stepped};
    std::vector<Measure> measures{Measure::degree,     Measure::strength,   Measure::betweenness,
                                  Measure::pagerank,   Measure::k_coreness, Measure::s_coreness,
                                  Measure::salience,   Measure::random};
    std::vector<double> fractions{0.001, 0.002, 0.005, 0.01, 0.02};
    std::size_t runs_per_cell = 50;
    bool write_snapshots = false;

    // Single-run settings for `simulate`.
    ScheduleKind strategy = ScheduleKind::fixed;
    Measure measure = Measure::salience;
    double fraction = 0.01;
    std::size_t run_index = 0;
};

/// Relative paths inside the document are resolved against `base_dir`.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Full document with every value spelled out; parse_config round-trips it.
nlohmann::ordered_json to_json(const RunConfig& cfg);

/// The configured networks: file sources, or `instances` generated ones.
std::vector<NetworkSource> network_sources(const RunConfig& cfg);

SweepSpec make_sweep_spec(const RunConfig& cfg);

}  // namespace hksim
