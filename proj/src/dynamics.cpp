#include "hksim/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "hksim/metrics.hpp"

namespace hksim {

void InitSpec::validate() const {
    if (!(eps_low >= 0.0 && eps_low <= eps_high && eps_high <= 1.0)) {
        throw dynamics_error("need 0 <= eps_low <= eps_high <= 1");
    }
}

void Schedule::validate() const {
    if (!(final_value >= 0.0 && final_value <= 1.0)) throw dynamics_error("schedule final_value must lie in [0,1]");
    if (kind == ScheduleKind::fixed) return;
    if (!(start_value >= 0.0 && start_value <= final_value)) {
        throw dynamics_error("schedule start_value must lie in [0, final_value]");
    }
    if (periods < 1) throw dynamics_error("schedule periods must be at least 1");
    if (!(increment > 0.0)) throw dynamics_error("schedule increment must be positive");
    if (periods * increment < final_value - start_value - 1e-12) {
        throw dynamics_error("schedule cannot reach its final value: periods * increment < final_value - start_value");
    }
}

std::string_view to_string(ScheduleKind kind) {
    return kind == ScheduleKind::fixed ? "static" : "dynamic";
}

ScheduleKind parse_schedule_kind(std::string_view name) {
    if (name == "static") return ScheduleKind::fixed;
    if (name == "dynamic") return ScheduleKind::stepped;
    throw dynamics_error("unknown strategy '" + std::string(name) + "' (expected static or dynamic)");
}

double schedule_value(const Schedule& s, std::size_t t, std::size_t max_steps) {
    if (s.kind == ScheduleKind::fixed) return s.final_value;
    const std::size_t period_len = std::max<std::size_t>(1, max_steps / static_cast<std::size_t>(s.periods));
    const double raw = s.start_value + s.increment * static_cast<double>(t / period_len);
    return std::min(raw, s.final_value);
}

OpinionState init_state(const WeightedGraph& g, const InitSpec& spec, Rng& rng) {
    spec.validate();
    OpinionState st;
    const std::size_t n = g.node_count();
    st.opinions.resize(n);
    st.confidences.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        st.opinions[i] = uniform01(rng);
        st.confidences[i] = uniform(rng, spec.eps_low, spec.eps_high);
    }
    return st;
}

std::vector<node_id> interaction_set(const WeightedGraph& g, const OpinionState& state, node_id i, bool include_self) {
    std::vector<node_id> out;
    const double xi = state.opinions[i];
    const double eps = state.confidences[i];
    bool self_pending = include_self;
    for (const auto& nb : g.neighbors(i)) {
        if (self_pending && i < nb.node) {
            out.push_back(i);
            self_pending = false;
        }
        if (std::abs(xi - state.opinions[nb.node]) <= eps) out.push_back(nb.node);
    }
    if (self_pending) out.push_back(i);
    return out;
}

double hk_step_into(const WeightedGraph& g, const OpinionState& state, double stubborn_value, OpinionState& next,
                    bool include_self) {
    const std::size_t n = g.node_count();
    if (state.opinions.size() != n || state.confidences.size() != n) {
        throw dynamics_error("state size does not match the graph");
    }
    next.opinions.resize(n);
    next.confidences = state.confidences;
    next.stubborn = state.stubborn;
    next.time = state.time + 1;

    const auto& x = state.opinions;
    double change = 0.0;
    for (node_id i = 0; i < n; ++i) {
        const double xi = x[i];
        const double eps = state.confidences[i];
        double num = 0.0, den = 0.0;
        for (const auto& nb : g.neighbors(i)) {
            // Branch-free: out-of-range neighbors add exact zeros.
            const double xj = x[nb.node];
            const double in = std::abs(xi - xj) <= eps ? 1.0 : 0.0;
            const double w = in * nb.weight;
            num += w * xj;
            den += w;
        }
        if (include_self) {
            num += xi;
            den += 1.0;
        }
        next.opinions[i] = den > 0.0 ? num / den : xi;
    }
    for (node_id s : state.stubborn) next.opinions[s] = stubborn_value;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next.opinions[i] - x[i]);
    return change;
}

OpinionState hk_step(const WeightedGraph& g, const OpinionState& state, double stubborn_value, bool include_self) {
    OpinionState next;
    hk_step_into(g, state, stubborn_value, next, include_self);
    return next;
}

void SimConfig::validate() const {
    if (max_steps < 1) throw dynamics_error("max_steps must be at least 1");
    if (!(conv_tol > 0.0)) throw dynamics_error("conv_tol must be positive");
    if (!(near_tol > 0.0)) throw dynamics_error("near_tol must be positive");
}

SimResult run_simulation(const WeightedGraph& g, OpinionState state, const StubbornPlan& plan, const SimConfig& sim) {
    sim.validate();
    plan.schedule.validate();
    const std::size_t n = g.node_count();
    for (node_id s : plan.stubborn) {
        if (s >= n) throw dynamics_error("stubborn node " + std::to_string(s) + " out of range");
    }
    const auto& sched = plan.schedule;
    const double target = sched.final_value;

    state.stubborn = plan.stubborn;
    state.time = 0;
    for (node_id s : state.stubborn) state.opinions[s] = schedule_value(sched, 0, sim.max_steps);

    SimResult r;
    r.stubborn = plan.stubborn;
    auto record = [&](const OpinionState& st) {
        if (sim.record_series) {
            r.series.push_back({mean_opinion(st.opinions), fraction_near(st.opinions, target, sim.near_tol)});
        }
        if (sim.snapshot_interval > 0 && st.time % sim.snapshot_interval == 0) {
            r.snapshots.push_back({st.time, st.opinions});
        }
    };
    record(state);

    OpinionState next;
    while (state.time < sim.max_steps) {
        const double value = schedule_value(sched, state.time + 1, sim.max_steps);
        const double change = hk_step_into(g, state, value, next, sim.include_self);
        std::swap(state, next);
        record(state);
        const bool armed = sched.kind == ScheduleKind::fixed || value == sched.final_value;
        if (armed && change < sim.conv_tol) {
            r.converged_at = state.time;
            break;
        }
    }
    r.steps = state.time;
    if (sim.snapshot_interval > 0 && (r.snapshots.empty() || r.snapshots.back().step != state.time)) {
        r.snapshots.push_back({state.time, state.opinions});
    }
    r.final_opinions = std::move(state.opinions);
    return r;
}

SimResult run_simulation(const WeightedGraph& g, const InitSpec& init, const StubbornPlan& plan, const SimConfig& sim,
                         std::uint64_t seed) {
    Rng rng(seed);
    auto r = run_simulation(g, init_state(g, init, rng), plan, sim);
    r.seed = seed;
    return r;
}

std::string sim_result_json(const SimResult& r, int indent) {
    nlohmann::ordered_json j;
    j["seed"] = r.seed;
    j["steps"] = r.steps;
    j["converged_at"] = r.converged_at ? nlohmann::ordered_json(*r.converged_at) : nlohmann::ordered_json(nullptr);
    j["stubborn"] = r.stubborn;
    j["final_mean"] = r.final_opinions.empty() ? 0.0 : mean_opinion(r.final_opinions);
    j["final_opinions"] = r.final_opinions;
    auto& series = j["series"];
    series = nlohmann::ordered_json::object();
    std::vector<double> means, fracs;
    for (const auto& p : r.series) {
        means.push_back(p.mean);
        fracs.push_back(p.fraction_near);
    }
    series["mean"] = means;
    series["fraction_near"] = fracs;
    return j.dump(indent);
}

}  // namespace hksim
