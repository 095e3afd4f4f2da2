#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hksim {

double mean_opinion(std::span<const double> opinions);

/// Share of opinions strictly closer than tol to target.
double fraction_near(std::span<const double> opinions, double target, double tol = 0.05);

/// Index of the bin holding x among `bins` uniform bins over [0,1]. Bins are
/// half-open except the last, which includes 1. Values outside [0,1] go to
/// the nearest end bin.
std::size_t bin_index(double x, std::size_t bins);

std::vector<std::size_t> histogram(std::span<const double> opinions, std::size_t bins = 50);

/// Sorts the opinions and starts a new cluster wherever consecutive values
/// are more than `gap` apart. Only clusters holding at least min_share of
/// the population are counted.
std::size_t count_clusters(std::span<const double> opinions, double gap = 0.05, double min_share = 0.01);

/// One row per snapshot: the histogram normalized to sum 1.
std::vector<std::vector<double>> density_matrix(const std::vector<std::vector<double>>& snapshots,
                                                std::size_t bins = 50);

struct OpinionSummary {
    double mean = 0.0;
    double fraction_near_target = 0.0;
    std::vector<std::size_t> histogram;
    std::size_t cluster_count = 0;
};

OpinionSummary summarize(std::span<const double> opinions, double target, double tol = 0.05, std::size_t bins = 50);

}  // namespace hksim
