#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hksim/graph.hpp"
#include "hksim/rng.hpp"

namespace hksim {

class dynamics_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct InitSpec {
    double eps_low = 0.05;
    double eps_high = 0.25;

    void validate() const;
};

/// fixed: stubborn opinion is final_value throughout. stepped: starts at
/// start_value and rises by `increment` at each of `periods` equal periods,
/// clamped at final_value.
enum class ScheduleKind { fixed, stepped };

struct Schedule {
    ScheduleKind kind = ScheduleKind::fixed;
    double final_value = 1.0;
    double start_value = 0.5;
    int periods = 6;
    double increment = 0.1;

    /// Throws dynamics_error, e.g. when a stepped schedule cannot reach its
    /// final value.
    void validate() const;
};

/// "static" / "dynamic", the names used in configs and CSV output.
std::string_view to_string(ScheduleKind kind);
ScheduleKind parse_schedule_kind(std::string_view name);

/// Stubborn opinion at step t of a run lasting max_steps.
double schedule_value(const Schedule& s, std::size_t t, std::size_t max_steps);

struct OpinionState {
    std::vector<double> opinions;
    std::vector<double> confidences;
    std::vector<node_id> stubborn;
    std::size_t time = 0;
};

/// Uniform opinions on [0,1] and confidences on [eps_low, eps_high], drawn
/// per node (opinion then confidence). No stubborn nodes.
OpinionState init_state(const WeightedGraph& g, const InitSpec& spec, Rng& rng);

/// Neighbors j of i with |x_i - x_j| <= eps_i, ascending; with include_self
/// i itself is added.
std::vector<node_id> interaction_set(const WeightedGraph& g, const OpinionState& state, node_id i,
                                     bool include_self = false);

/// One synchronous update into `next` (resized as needed). Stubborn nodes are
/// set to `stubborn_value`; ordinary nodes with an empty interaction set keep
/// their opinion. Self, when included, has unit weight. Returns the total
/// absolute opinion change.
double hk_step_into(const WeightedGraph& g, const OpinionState& state, double stubborn_value, OpinionState& next,
                    bool include_self = false);

OpinionState hk_step(const WeightedGraph& g, const OpinionState& state, double stubborn_value,
                     bool include_self = false);

struct StubbornPlan {
    std::vector<node_id> stubborn;
    Schedule schedule;
};

struct SimConfig {
    std::size_t max_steps = 10000;
    double conv_tol = 1e-4;
    std::size_t snapshot_interval = 10;  // 0 disables snapshots
    bool include_self = false;
    double near_tol = 0.05;
    bool record_series = true;

    void validate() const;
};

struct SeriesPoint {
    double mean = 0.0;
    double fraction_near = 0.0;
};

struct Snapshot {
    std::size_t step = 0;
    std::vector<double> opinions;
};

struct SimResult {
    std::vector<double> final_opinions;
    std::optional<std::size_t> converged_at;
    std::size_t steps = 0;
    std::vector<SeriesPoint> series;  // one entry per state, t = 0..steps
    std::vector<Snapshot> snapshots;  // every snapshot_interval steps and the final state
    std::vector<node_id> stubborn;
    std::uint64_t seed = 0;
};

/// Initializes from `seed`, pins the plan's stubborn nodes to the schedule
/// and iterates until the total one-step change drops below conv_tol or
/// max_steps is reached. For a stepped schedule convergence is only checked
/// once the schedule has reached its final value. Fraction-near is measured
/// against the schedule's final value.
SimResult run_simulation(const WeightedGraph& g, const InitSpec& init, const StubbornPlan& plan,
                         const SimConfig& sim, std::uint64_t seed);

/// Same, from a prepared state (its stubborn list is replaced by the plan's).
SimResult run_simulation(const WeightedGraph& g, OpinionState state, const StubbornPlan& plan,
                         const SimConfig& sim);

/// Per-run record as a JSON document.
std::string sim_result_json(const SimResult& r, int indent = 2);

}  // namespace hksim
