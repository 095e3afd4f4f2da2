#include "hksim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hksim {

double mean_opinion(std::span<const double> opinions) {
    if (opinions.empty()) throw std::invalid_argument("mean of an empty opinion vector");
    double sum = 0.0;
    for (double x : opinions) sum += x;
    return sum / static_cast<double>(opinions.size());
}

double fraction_near(std::span<const double> opinions, double target, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (opinions.empty()) return 0.0;
    std::size_t hits = 0;
    for (double x : opinions) {
        if (std::abs(x - target) < tol) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(opinions.size());
}

std::size_t bin_index(double x, std::size_t bins) {
    if (!(x > 0.0)) return 0;
    if (x >= 1.0) return bins - 1;
    return std::min(bins - 1, static_cast<std::size_t>(x * static_cast<double>(bins)));
}

std::vector<std::size_t> histogram(std::span<const double> opinions, std::size_t bins) {
    if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
    std::vector<std::size_t> counts(bins, 0);
    for (double x : opinions) ++counts[bin_index(x, bins)];
    return counts;
}

std::size_t count_clusters(std::span<const double> opinions, double gap, double min_share) {
    if (!(gap > 0.0)) throw std::invalid_argument("cluster gap must be positive");
    if (opinions.empty()) return 0;
    std::vector<double> sorted(opinions.begin(), opinions.end());
    std::sort(sorted.begin(), sorted.end());
    const double min_size = min_share * static_cast<double>(sorted.size());
    std::size_t clusters = 0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= sorted.size(); ++i) {
        if (i == sorted.size() || sorted[i] - sorted[i - 1] > gap) {
            if (static_cast<double>(run) >= min_size) ++clusters;
            run = 1;
        } else {
            ++run;
        }
    }
    return clusters;
}

std::vector<std::vector<double>> density_matrix(const std::vector<std::vector<double>>& snapshots, std::size_t bins) {
    if (snapshots.empty()) throw std::invalid_argument("density matrix needs at least one snapshot");
    std::vector<std::vector<double>> rows;
    rows.reserve(snapshots.size());
    for (const auto& snap : snapshots) {
        if (snap.empty()) throw std::invalid_argument("empty snapshot");
        auto counts = histogram(snap, bins);
        std::vector<double> row(bins);
        const double total = static_cast<double>(snap.size());
        for (std::size_t b = 0; b < bins; ++b) row[b] = static_cast<double>(counts[b]) / total;
        rows.push_back(std::move(row));
    }
    return rows;
}

OpinionSummary summarize(std::span<const double> opinions, double target, double tol, std::size_t bins) {
    OpinionSummary s;
    s.mean = mean_opinion(opinions);
    s.fraction_near_target = fraction_near(opinions, target, tol);
    s.histogram = histogram(opinions, bins);
    s.cluster_count = count_clusters(opinions);
    return s;
}

}  // namespace hksim
