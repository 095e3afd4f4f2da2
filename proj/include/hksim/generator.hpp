#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hksim/graph.hpp"
#include "hksim/rng.hpp"

namespace hksim {

class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class generation_error : public std::runtime_error {
public:
    generation_error(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
    [[nodiscard]] const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// Parameters of an LFR-style weighted benchmark network.
struct LfrParams {
    std::size_t n = 1000;
    double k_mean = 20.0;
    std::size_t k_min = 6;
    std::size_t k_max = 200;
    double tau_degree = 2.3;
    double tau_community = 1.5;
    std::size_t c_min = 20;
    std::size_t c_max = 50;
    double mu_topo = 0.1;
    double mu_w = 0.1;
    double beta = 1.5;
    std::uint64_t seed = 1;
    int weight_sweeps = 20;
    int max_retries = 10;

    /// Throws parameter_error naming the first violated constraint.
    void validate() const;
};

/// Degrees in [k_min, k_max] from a truncated discrete power law. A
/// fractional lower (or upper) cutoff is tuned so the expected mean equals
/// k_mean; draws are repeated until the empirical mean is within 5%. The
/// total is made even.
std::vector<std::size_t> sample_degree_sequence(const LfrParams& p, Rng& rng);

/// Community sizes in [c_min, c_max] summing exactly to n.
std::vector<std::size_t> sample_community_sizes(const LfrParams& p, Rng& rng);

/// Planted-partition configuration model. Node i gets (1 - mu_topo) * k_i
/// internal stubs, rounded up with probability equal to the fractional part
/// by systematic sampling within each community, matched inside it;
/// the rest are matched across communities. A node whose internal degree no
/// community can host is capped at community size minus one, and such nodes
/// are spread over communities. Self-loops and multi-edges are removed by
/// degree-preserving swaps; external stubs may swap with any existing edge.
/// Unit weights; communities numbered from 0.
WeightedGraph build_topology(const std::vector<std::size_t>& degrees,
                             const std::vector<std::size_t>& community_sizes, double mu_topo, Rng& rng);

struct WeightFitReport {
    std::size_t folded_nodes = 0;  // nodes whose internal or external target was folded into the other
};

/// Fits positive weights so node strength tracks k^beta with a (1 - mu_w)
/// share inside the community, by symmetric iterative proportional fitting.
WeightedGraph assign_weights(const WeightedGraph& g, double beta, double mu_w, int sweeps = 20,
                             WeightFitReport* report = nullptr);

/// Full pipeline; deterministic in p (including p.seed).
WeightedGraph generate_lfr(const LfrParams& p);

}  // namespace hksim
