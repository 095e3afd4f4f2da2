#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "hksim/config.hpp"

namespace hksim {

/// Writes <id>.edges and <id>.communities for every configured instance into
/// `out_dir` and prints one statistics line per instance.
void cmd_generate(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

/// Per-node table `node,measure,value` for the seven centralities plus
/// hss_degree. Optionally writes the High-Salience Skeleton as an edge list.
void cmd_centrality(const RunConfig& cfg, const NetworkSource& network, std::ostream& csv,
                    const std::optional<std::filesystem::path>& hss_path, std::ostream& log);

/// One run of the configured (strategy, measure, fraction, run_index) cell.
/// Without a network the first configured network is used. Writes
/// runs.csv, run.json, series.csv and, with snapshots enabled,
/// snapshots.csv into `out_dir`.
void cmd_simulate(const RunConfig& cfg, const std::optional<NetworkSource>& network,
                  const std::filesystem::path& out_dir, std::ostream& log);

/// Full grid into cfg.output: runs.csv, aggregates.csv, summary.json,
/// config.json, failures.csv when jobs failed, snapshots/ when enabled.
/// Returns the number of failed jobs.
std::size_t cmd_sweep(const RunConfig& cfg, std::ostream& log);

/// Re-aggregates an existing runs.csv.
void cmd_report(const std::filesystem::path& runs_csv, const std::filesystem::path& out_csv, std::ostream& log);

}  // namespace hksim
