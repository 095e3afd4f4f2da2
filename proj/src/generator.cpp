#include "hksim/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace hksim {

void LfrParams::validate() const {
    auto fail = [](const std::string& msg) { throw parameter_error("invalid LFR parameters: " + msg); };
    if (n < 2) fail("n must be at least 2");
    if (k_min < 1) fail("k_min must be at least 1");
    if (!(static_cast<double>(k_min) <= k_mean && k_mean <= static_cast<double>(k_max))) {
        fail("need k_min <= k_mean <= k_max");
    }
    if (k_max >= n) fail("k_max must be smaller than n");
    if (c_min < 2 || c_min > c_max) fail("need 2 <= c_min <= c_max");
    if (c_max > n) fail("c_max must not exceed n");
    if (!(mu_topo >= 0.0 && mu_topo <= 1.0)) fail("mu_topo must lie in [0,1]");
    if (!(mu_w >= 0.0 && mu_w <= 1.0)) fail("mu_w must lie in [0,1]");
    if (!(beta > 0.0)) fail("beta must be positive");
    if (!(tau_degree > 0.0) || !(tau_community > 0.0)) fail("power-law exponents must be positive");
    if (weight_sweeps < 0) fail("weight_sweeps must be non-negative");
    if (max_retries < 1) fail("max_retries must be at least 1");
}

namespace {

/// Discrete power-law weights on [lo, hi] with fractional cutoffs: the
/// lowest (highest) support point is weighted by how far the real-valued
/// cutoff x (y) leaves it inside the window.
std::vector<double> cutoff_weights(std::size_t lo, std::size_t hi, double tau, double x, double y) {
    std::vector<double> w(hi - lo + 1);
    for (std::size_t k = lo; k <= hi; ++k) {
        const double kd = static_cast<double>(k);
        const double keep_low = std::clamp(kd + 1.0 - x, 0.0, 1.0);
        const double keep_high = std::clamp(y + 1.0 - kd, 0.0, 1.0);
        w[k - lo] = std::pow(kd, -tau) * keep_low * keep_high;
    }
    return w;
}

double weighted_mean(std::size_t lo, const std::vector<double>& w) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        num += static_cast<double>(lo + i) * w[i];
        den += w[i];
    }
    return den > 0.0 ? num / den : 0.0;
}

using EdgeKeySet = std::unordered_set<std::uint64_t>;

std::uint64_t edge_key(node_id a, node_id b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

/// Stub matching into a shared edge list. Stubs are shuffled and paired;
/// every pair that is a self-loop, a multi-edge or rejected by `allowed` is
/// first recombined with another such pair, then repaired by a
/// degree-preserving swap with an edge already in `edges`:
/// (a,b) + (c,d) -> (a,c) + (b,d). Swap partners that satisfy `allowed`
/// themselves are tried first so the repair does not turn an edge of the
/// other kind into one of this kind; any edge from `swap_from` on is the
/// fallback. Returns the stubs that could not be placed.
template <typename Allowed>
std::vector<node_id> pair_stubs(std::vector<node_id> stubs, std::vector<std::pair<node_id, node_id>>& edges,
                                std::size_t swap_from, EdgeKeySet& existing, Allowed allowed, Rng& rng) {
    std::vector<node_id> leftover;
    std::shuffle(stubs.begin(), stubs.end(), rng);
    if (stubs.size() % 2 == 1) {
        leftover.push_back(stubs.back());
        stubs.pop_back();
    }
    auto valid = [&](node_id a, node_id b) { return a != b && allowed(a, b) && !existing.contains(edge_key(a, b)); };
    auto add = [&](node_id a, node_id b) {
        existing.insert(edge_key(a, b));
        edges.emplace_back(a, b);
    };

    std::vector<std::pair<node_id, node_id>> bad;
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
        node_id a = stubs[k], b = stubs[k + 1];
        if (valid(a, b)) {
            add(a, b);
        } else {
            bad.emplace_back(a, b);
        }
    }

    for (std::size_t x = 0; x < bad.size(); ++x) {
        for (std::size_t y = x + 1; y < bad.size(); ++y) {
            auto [a, b] = bad[x];
            auto [c, d] = bad[y];
            if (edge_key(a, c) == edge_key(b, d) || edge_key(a, d) == edge_key(b, c)) continue;
            if (valid(a, d) && valid(b, c)) std::swap(c, d);
            if (!valid(a, c) || !valid(b, d)) continue;
            add(a, c);
            add(b, d);
            bad.erase(bad.begin() + static_cast<std::ptrdiff_t>(y));
            bad.erase(bad.begin() + static_cast<std::ptrdiff_t>(x));
            --x;
            break;
        }
    }

    const std::size_t budget = 200 + 200 * bad.size();
    for (std::size_t attempt = 0; attempt < 2 * budget && !bad.empty() && edges.size() > swap_from; ++attempt) {
        auto [a, b] = bad.back();
        const std::size_t idx = swap_from + uniform_index(rng, edges.size() - swap_from);
        auto [c, d] = edges[idx];
        if (attempt < budget && !allowed(c, d)) continue;
        if (uniform01(rng) < 0.5) std::swap(c, d);
        if (!valid(a, c) || !valid(b, d) || edge_key(a, c) == edge_key(b, d)) continue;
        existing.erase(edge_key(c, d));
        existing.insert(edge_key(a, c));
        existing.insert(edge_key(b, d));
        edges[idx] = {a, c};
        edges.emplace_back(b, d);
        bad.pop_back();
    }
    for (auto [a, b] : bad) {
        leftover.push_back(a);
        leftover.push_back(b);
    }
    return leftover;
}

}  // namespace

std::vector<std::size_t> sample_degree_sequence(const LfrParams& p, Rng& rng) {
    p.validate();
    std::vector<std::size_t> degrees(p.n, p.k_min);
    if (p.k_min == p.k_max) {
        if ((p.n * p.k_min) % 2 == 1) throw parameter_error("n * k_min is odd; no graph has this degree sequence");
        return degrees;
    }

    const double lo = static_cast<double>(p.k_min);
    const double hi = static_cast<double>(p.k_max);
    auto mean_at = [&](double x, double y) {
        return weighted_mean(p.k_min, cutoff_weights(p.k_min, p.k_max, p.tau_degree, x, y));
    };
    // The full window's mean decides which end of the window moves.
    double x = lo, y = hi;
    const double full_mean = mean_at(lo, hi);
    if (full_mean < p.k_mean) {
        double a = lo, b = hi;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (a + b);
            (mean_at(mid, hi) < p.k_mean ? a : b) = mid;
        }
        x = 0.5 * (a + b);
    } else if (full_mean > p.k_mean) {
        double a = lo, b = hi;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (a + b);
            (mean_at(lo, mid) > p.k_mean ? b : a) = mid;
        }
        y = 0.5 * (a + b);
    }
    const auto weights = cutoff_weights(p.k_min, p.k_max, p.tau_degree, x, y);
    std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());

    constexpr int max_draws = 1000;
    for (int draw = 0; draw < max_draws; ++draw) {
        double total = 0.0;
        for (auto& k : degrees) {
            k = p.k_min + dist(rng);
            total += static_cast<double>(k);
        }
        if (std::abs(total / static_cast<double>(p.n) - p.k_mean) <= 0.05 * p.k_mean) break;
        if (draw + 1 == max_draws) {
            throw parameter_error("degree sequence mean cannot be brought within 5% of k_mean");
        }
    }
    if (std::accumulate(degrees.begin(), degrees.end(), std::size_t{0}) % 2 == 1) {
        std::vector<std::size_t> movable;
        for (std::size_t i = 0; i < degrees.size(); ++i) {
            if (degrees[i] > p.k_min) movable.push_back(i);
        }
        if (movable.empty()) {
            ++degrees[uniform_index(rng, degrees.size())];
        } else {
            --degrees[movable[uniform_index(rng, movable.size())]];
        }
    }
    return degrees;
}

std::vector<std::size_t> sample_community_sizes(const LfrParams& p, Rng& rng) {
    p.validate();
    if (p.n < p.c_min) throw parameter_error("n is smaller than c_min");
    const auto weights = cutoff_weights(p.c_min, p.c_max, p.tau_community, static_cast<double>(p.c_min),
                                        static_cast<double>(p.c_max));
    std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());

    std::vector<std::size_t> sizes;
    constexpr int max_draws = 10000;
    for (int draw = 0; draw < max_draws; ++draw) {
        sizes.clear();
        std::size_t total = 0;
        while (total < p.n) {
            sizes.push_back(p.c_min + dist(rng));
            total += sizes.back();
        }
        const std::size_t excess = total - p.n;
        if (sizes.back() >= p.c_min + excess) {
            sizes.back() -= excess;
            return sizes;
        }
    }
    throw parameter_error("cannot split n into community sizes within [c_min, c_max]");
}

WeightedGraph build_topology(const std::vector<std::size_t>& degrees,
                             const std::vector<std::size_t>& community_sizes, double mu_topo, Rng& rng) {
    const std::size_t n = degrees.size();
    if (std::accumulate(community_sizes.begin(), community_sizes.end(), std::size_t{0}) != n) {
        throw parameter_error("community sizes must sum to the number of nodes");
    }
    if (std::accumulate(degrees.begin(), degrees.end(), std::size_t{0}) % 2 == 1) {
        throw parameter_error("degree sum must be even");
    }

    // Real-valued internal targets; membership is decided on the rounded-up
    // value so either rounding fits the community.
    std::vector<double> want(n);
    std::vector<std::size_t> internal(n), external(n);
    for (std::size_t i = 0; i < n; ++i) {
        want[i] = (1.0 - mu_topo) * static_cast<double>(degrees[i]);
        internal[i] = std::min(degrees[i], static_cast<std::size_t>(std::ceil(want[i])));
    }
    std::vector<bool> capped(n, false);

    // Membership: highest internal degree first, each node into a community
    // with room that can host it, chosen proportionally to free slots.
    std::vector<node_id> order(n);
    std::iota(order.begin(), order.end(), node_id{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::stable_sort(order.begin(), order.end(), [&](node_id a, node_id b) { return internal[a] > internal[b]; });

    const std::size_t ncomm = community_sizes.size();
    std::vector<std::size_t> free_slots = community_sizes;
    std::vector<std::int64_t> community(n, -1);
    std::vector<double> pick_weights(ncomm);
    std::vector<std::size_t> capped_hubs(ncomm, 0);
    for (node_id i : order) {
        double total = 0.0;
        for (std::size_t c = 0; c < ncomm; ++c) {
            const bool fits = free_slots[c] > 0 && community_sizes[c] > internal[i];
            pick_weights[c] = fits ? static_cast<double>(free_slots[c]) : 0.0;
            total += pick_weights[c];
        }
        std::size_t chosen = 0;
        if (total > 0.0) {
            double r = uniform01(rng) * total;
            for (chosen = 0; chosen + 1 < ncomm; ++chosen) {
                if (r < pick_weights[chosen]) break;
                r -= pick_weights[chosen];
            }
            while (pick_weights[chosen] == 0.0) --chosen;
        } else {
            // Internal degree exceeds every open community: take the open
            // community holding the fewest such hubs (largest on ties) and
            // push the surplus outside.
            bool found = false;
            for (std::size_t c = 0; c < ncomm; ++c) {
                if (free_slots[c] == 0) continue;
                if (!found || capped_hubs[c] < capped_hubs[chosen] ||
                    (capped_hubs[c] == capped_hubs[chosen] && community_sizes[c] > community_sizes[chosen])) {
                    chosen = c;
                    found = true;
                }
            }
            ++capped_hubs[chosen];
            internal[i] = community_sizes[chosen] - 1;
            capped[i] = true;
        }
        community[i] = static_cast<std::int64_t>(chosen);
        --free_slots[chosen];
    }

    std::vector<std::vector<node_id>> members(ncomm);
    for (node_id i = 0; i < n; ++i) members[static_cast<std::size_t>(community[i])].push_back(i);

    EdgeKeySet existing;
    existing.reserve(std::accumulate(degrees.begin(), degrees.end(), std::size_t{0}));
    std::vector<std::pair<node_id, node_id>> pairs;

    // Round the internal targets by systematic sampling inside each community:
    // node i is rounded up with probability frac(want_i) as before, but the
    // community total is fixed, so equal communities offer equal numbers of
    // external stubs.
    for (auto& group : members) {
        std::vector<node_id> shuffled = group;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const double offset = uniform01(rng);
        double cum = 0.0;
        for (node_id i : shuffled) {
            if (capped[i]) continue;
            const double lo = std::floor(want[i]);
            const double before = cum;
            cum += want[i] - lo;
            const bool up = std::floor(cum + offset) > std::floor(before + offset);
            internal[i] = std::min(degrees[i], static_cast<std::size_t>(lo) + (up ? 1 : 0));
        }
    }
    for (std::size_t i = 0; i < n; ++i) external[i] = degrees[i] - internal[i];

    for (auto& group : members) {
        std::size_t stub_total = 0;
        for (node_id i : group) stub_total += internal[i];
        if (stub_total % 2 == 1) {
            std::vector<node_id> candidates;
            for (node_id i : group) {
                if (internal[i] > 0) candidates.push_back(i);
            }
            node_id i = candidates[uniform_index(rng, candidates.size())];
            --internal[i];
            ++external[i];
        }
        std::vector<node_id> stubs;
        for (node_id i : group) stubs.insert(stubs.end(), internal[i], i);
        const std::size_t first = pairs.size();
        auto leftover = pair_stubs(std::move(stubs), pairs, first, existing,
                                   [](node_id, node_id) { return true; }, rng);
        for (node_id i : leftover) ++external[i];
    }

    std::vector<node_id> stubs;
    for (node_id i = 0; i < n; ++i) stubs.insert(stubs.end(), external[i], i);
    const std::size_t pool = stubs.size();
    auto leftover = pair_stubs(
        std::move(stubs), pairs, 0, existing, [&](node_id a, node_id b) { return community[a] != community[b]; },
        rng);
    if (!leftover.empty()) {
        throw generation_error("topology", std::to_string(leftover.size()) + " of " + std::to_string(pool) +
                                               " external stubs could not be matched without multi-edges");
    }

    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (auto [a, b] : pairs) edges.push_back({a, b, 1.0});
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        const auto kx = edge_key(x.u, x.v), ky = edge_key(y.u, y.v);
        return kx < ky;
    });
    return WeightedGraph(n, std::move(edges)).with_communities(std::move(community));
}

WeightedGraph assign_weights(const WeightedGraph& g, double beta, double mu_w, int sweeps, WeightFitReport* report) {
    if (!g.has_communities()) throw parameter_error("assign_weights needs community labels");
    const std::size_t n = g.node_count();
    const auto comm = g.communities();
    auto edges = g.edges();

    std::vector<double> target_in(n), target_ex(n);
    std::vector<std::size_t> deg_in(n, 0), deg_ex(n, 0);
    for (const auto& e : edges) {
        auto& bucket_u = comm[e.u] == comm[e.v] ? deg_in : deg_ex;
        ++bucket_u[e.u];
        ++bucket_u[e.v];
    }
    std::size_t folded = 0;
    for (node_id i = 0; i < n; ++i) {
        const double sigma = std::pow(static_cast<double>(g.degree(i)), beta);
        target_in[i] = (1.0 - mu_w) * sigma;
        target_ex[i] = mu_w * sigma;
        if (deg_ex[i] == 0 && deg_in[i] > 0 && target_ex[i] > 0.0) {
            target_in[i] = sigma;
            target_ex[i] = 0.0;
            ++folded;
        } else if (deg_in[i] == 0 && deg_ex[i] > 0 && target_in[i] > 0.0) {
            target_ex[i] = sigma;
            target_in[i] = 0.0;
            ++folded;
        }
    }
    if (report) report->folded_nodes = folded;

    std::vector<double> w(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto& e = edges[k];
        const double t_u = std::pow(static_cast<double>(g.degree(e.u)), beta) / static_cast<double>(g.degree(e.u));
        const double t_v = std::pow(static_cast<double>(g.degree(e.v)), beta) / static_cast<double>(g.degree(e.v));
        w[k] = 0.5 * (t_u + t_v);
    }

    std::vector<double> cur_in(n), cur_ex(n), ratio_in(n), ratio_ex(n);
    auto ratio = [](double target, double current) { return (target > 0.0 && current > 0.0) ? target / current : 1.0; };
    for (int s = 0; s < sweeps; ++s) {
        std::fill(cur_in.begin(), cur_in.end(), 0.0);
        std::fill(cur_ex.begin(), cur_ex.end(), 0.0);
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const auto& e = edges[k];
            auto& bucket = comm[e.u] == comm[e.v] ? cur_in : cur_ex;
            bucket[e.u] += w[k];
            bucket[e.v] += w[k];
        }
        for (node_id i = 0; i < n; ++i) {
            ratio_in[i] = ratio(target_in[i], cur_in[i]);
            ratio_ex[i] = ratio(target_ex[i], cur_ex[i]);
        }
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const auto& e = edges[k];
            const bool inside = comm[e.u] == comm[e.v];
            const double r = inside ? ratio_in[e.u] * ratio_in[e.v] : ratio_ex[e.u] * ratio_ex[e.v];
            w[k] *= std::sqrt(r);
        }
    }
    return g.with_weights(w);
}

WeightedGraph generate_lfr(const LfrParams& p) {
    p.validate();
    std::string last_failure;
    for (int attempt = 0; attempt < p.max_retries; ++attempt) {
        Rng rng(derive_seed(p.seed, static_cast<std::uint64_t>(attempt)));
        std::string stage = "degree_sequence";
        try {
            auto degrees = sample_degree_sequence(p, rng);
            stage = "community_sizes";
            auto sizes = sample_community_sizes(p, rng);
            stage = "topology";
            auto topo = build_topology(degrees, sizes, p.mu_topo, rng);
            stage = "weights";
            return assign_weights(topo, p.beta, p.mu_w, p.weight_sweeps);
        } catch (const generation_error& e) {
            last_failure = e.what();
        } catch (const parameter_error& e) {
            // Parameter problems do not go away on retry.
            throw generation_error(stage, e.what());
        }
    }
    throw generation_error("retries", "gave up after " + std::to_string(p.max_retries) +
                                          " attempts; last failure: " + last_failure);
}

}  // namespace hksim
