#include "hsis/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hsis/rng.hpp"

namespace hsis {

namespace {

constexpr std::uint64_t kChannelTransition = 1;
constexpr std::uint64_t kChannelSeed = 3;

std::size_t ceil_fraction(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
}

}  // namespace

SeedSpec SeedSpec::top_degree(double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("SeedSpec: fraction must lie in (0,1]");
    SeedSpec s;
    s.kind = Kind::top_degree_fraction;
    s.fraction = fraction;
    return s;
}

SeedSpec SeedSpec::bottom_degree(double fraction) {
    SeedSpec s = top_degree(fraction);
    s.kind = Kind::bottom_degree_fraction;
    return s;
}

SeedSpec SeedSpec::per_profile_count(std::size_t count) {
    if (count == 0) throw std::invalid_argument("SeedSpec: per-profile count must be positive");
    SeedSpec s;
    s.kind = Kind::fixed_per_profile;
    s.per_profile = count;
    return s;
}

SeedSpec SeedSpec::explicit_list(std::vector<NodeId> nodes) {
    if (nodes.empty()) throw std::invalid_argument("SeedSpec: explicit node list is empty");
    SeedSpec s;
    s.kind = Kind::explicit_nodes;
    s.nodes = std::move(nodes);
    return s;
}

std::vector<NodeId> seed_infection(const Graph& g, const ProfileMap& pm, const SeedSpec& spec,
                                   std::uint64_t rng_seed) {
    const std::size_t n = g.node_count();
    std::vector<NodeId> seeds;

    switch (spec.kind) {
        case SeedSpec::Kind::top_degree_fraction:
        case SeedSpec::Kind::bottom_degree_fraction: {
            const bool top = spec.kind == SeedSpec::Kind::top_degree_fraction;
            std::size_t count = std::min(n, std::max<std::size_t>(1, ceil_fraction(spec.fraction, n)));
            std::vector<NodeId> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
                if (g.degree(a) != g.degree(b))
                    return top ? g.degree(a) > g.degree(b) : g.degree(a) < g.degree(b);
                return a < b;  // degree ties break by node id
            });
            seeds.assign(order.begin(), order.begin() + count);
            break;
        }
        case SeedSpec::Kind::fixed_per_profile: {
            rng::Engine eng(rng::derive_seed(rng_seed, kChannelSeed));
            std::vector<std::vector<NodeId>> members(pm.k());
            for (NodeId i = 0; i < n; ++i) members[pm.profile_of(i)].push_back(i);
            for (std::uint32_t q = 0; q < pm.k(); ++q) {
                auto& pool = members[q];
                if (pool.size() < spec.per_profile) {
                    std::ostringstream msg;
                    msg << "seed_infection: profile " << q << " has " << pool.size()
                        << " nodes, cannot seed " << spec.per_profile;
                    throw std::invalid_argument(msg.str());
                }
                // partial Fisher-Yates: first per_profile entries are the sample
                for (std::size_t t = 0; t < spec.per_profile; ++t) {
                    std::size_t j = t + static_cast<std::size_t>(eng.below(pool.size() - t));
                    std::swap(pool[t], pool[j]);
                    seeds.push_back(pool[t]);
                }
            }
            break;
        }
        case SeedSpec::Kind::explicit_nodes: {
            for (NodeId v : spec.nodes)
                if (v >= n) {
                    std::ostringstream msg;
                    msg << "seed_infection: node id " << v << " out of range (n=" << n << ")";
                    throw std::invalid_argument(msg.str());
                }
            seeds = spec.nodes;
            break;
        }
    }

    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    if (seeds.empty()) throw std::invalid_argument("seed_infection: resolved seed set is empty");
    return seeds;
}

std::vector<std::uint8_t> sim_step(const Graph& g, const SystemMatrices& rates,
                                   const std::vector<std::uint8_t>& state, std::uint64_t seed,
                                   std::uint64_t round) {
    const std::size_t n = g.node_count();
    if (state.size() != n || rates.node_count() != n)
        throw std::invalid_argument("sim_step: dimension mismatch");

    // infected-neighbor counts from the round-start state
    std::vector<std::uint32_t> exposure(n, 0);
    for (NodeId i = 0; i < n; ++i)
        if (state[i])
            for (NodeId j : g.neighbors(i)) ++exposure[j];

    // One uniform per (node, round). An infected node heals on the bottom of
    // the interval (u < delta) and a susceptible one gets infected on the top
    // (u >= 1 - p_infect); the marginals are unchanged, and the shared draw
    // makes common-random-number couplings order-preserving whenever
    // p_infect <= 1 - delta.
    std::vector<std::uint8_t> next(n);
    for (NodeId i = 0; i < n; ++i) {
        if (state[i]) {
            next[i] = rng::u01(seed, round, i, kChannelTransition) >= rates.delta[i] ? 1 : 0;
        } else if (exposure[i] > 0) {
            double p_infect = 1.0 - std::pow(1.0 - rates.beta[i], static_cast<double>(exposure[i]));
            next[i] = rng::u01(seed, round, i, kChannelTransition) >= 1.0 - p_infect ? 1 : 0;
        } else {
            next[i] = 0;
        }
    }
    return next;
}

namespace {

std::vector<std::uint32_t> profile_counts(const std::vector<std::uint8_t>& state,
                                          const ProfileMap& pm) {
    std::vector<std::uint32_t> counts(pm.k(), 0);
    for (NodeId i = 0; i < state.size(); ++i)
        if (state[i]) ++counts[pm.profile_of(i)];
    return counts;
}

SimTrace run_one(const Graph& g, const ProfileMap& pm, const SystemMatrices& rates,
                 const SimConfig& cfg, const std::vector<NodeId>& seeds, std::uint64_t seed) {
    SimTrace trace;
    trace.rng_seed = seed;

    std::vector<std::uint8_t> state(g.node_count(), 0);
    for (NodeId v : seeds) state[v] = 1;

    auto record = [&](std::size_t round, const std::vector<std::uint32_t>& counts) {
        trace.recorded_rounds.push_back(round);
        trace.counts.push_back(counts);
        trace.totals.push_back(std::accumulate(counts.begin(), counts.end(), 0u));
    };

    auto counts = profile_counts(state, pm);
    record(0, counts);

    bool absorbed = counts == std::vector<std::uint32_t>(pm.k(), 0);
    for (std::size_t round = 1; round <= cfg.rounds; ++round) {
        if (!absorbed) {
            state = sim_step(g, rates, state, seed, round);
            counts = profile_counts(state, pm);
            if (std::all_of(counts.begin(), counts.end(), [](std::uint32_t c) { return c == 0; })) {
                absorbed = true;
                trace.absorbed_round = round;
            }
        }
        if (round % cfg.record_every == 0 || round == cfg.rounds) record(round, counts);
    }
    trace.final_state = std::move(state);

    // trailing-window mean fraction per profile
    auto sizes = pm.profile_sizes();
    std::size_t window_start = trace.recorded_rounds.size() -
        std::max<std::size_t>(1, static_cast<std::size_t>(
            std::floor(cfg.steady_window_frac * static_cast<double>(trace.recorded_rounds.size()))));
    trace.trailing_mean_fraction.assign(pm.k(), 0.0);
    for (std::size_t r = window_start; r < trace.recorded_rounds.size(); ++r)
        for (std::uint32_t q = 0; q < pm.k(); ++q)
            trace.trailing_mean_fraction[q] += trace.counts[r][q];
    for (std::uint32_t q = 0; q < pm.k(); ++q) {
        double denom = static_cast<double>(trace.recorded_rounds.size() - window_start) *
                       std::max<std::size_t>(1, sizes[q]);
        trace.trailing_mean_fraction[q] /= denom;
    }
    return trace;
}

}  // namespace

SimResult run_simulation(const Graph& g, const ProfileMap& pm, const ProfileParams& params,
                         const SimConfig& cfg) {
    if (cfg.rounds < 1) throw std::invalid_argument("run_simulation: rounds must be >= 1");
    if (cfg.replications < 1)
        throw std::invalid_argument("run_simulation: replications must be >= 1");
    if (cfg.record_every < 1)
        throw std::invalid_argument("run_simulation: record_every must be >= 1");
    if (pm.node_count() != g.node_count())
        throw std::invalid_argument("run_simulation: profile map does not cover the graph");

    const SystemMatrices rates = build_matrices(pm, params);
    const auto seeds = seed_infection(g, pm, cfg.seeding, cfg.rng_seed);

    SimResult result;
    result.initial_infected = seeds;
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
        std::uint64_t sub = rng::derive_seed(cfg.rng_seed, rep);
        result.traces.push_back(run_one(g, pm, rates, cfg, seeds, sub));
    }

    // aggregate: per-round per-profile mean and standard deviation
    SimAggregate& agg = result.aggregate;
    agg.recorded_rounds = result.traces.front().recorded_rounds;
    agg.profile_sizes = pm.profile_sizes();
    agg.replications = cfg.replications;
    const std::size_t nrec = agg.recorded_rounds.size();
    const std::uint32_t k = pm.k();
    agg.mean.assign(nrec, std::vector<double>(k, 0.0));
    agg.stddev.assign(nrec, std::vector<double>(k, 0.0));
    const double reps = static_cast<double>(cfg.replications);
    for (const auto& tr : result.traces)
        for (std::size_t r = 0; r < nrec; ++r)
            for (std::uint32_t q = 0; q < k; ++q) agg.mean[r][q] += tr.counts[r][q];
    for (std::size_t r = 0; r < nrec; ++r)
        for (std::uint32_t q = 0; q < k; ++q) agg.mean[r][q] /= reps;
    for (const auto& tr : result.traces)
        for (std::size_t r = 0; r < nrec; ++r)
            for (std::uint32_t q = 0; q < k; ++q) {
                double d = tr.counts[r][q] - agg.mean[r][q];
                agg.stddev[r][q] += d * d;
            }
    for (std::size_t r = 0; r < nrec; ++r)
        for (std::uint32_t q = 0; q < k; ++q)
            agg.stddev[r][q] = std::sqrt(agg.stddev[r][q] / reps);

    // steady when every profile's aggregate count range over the trailing
    // window stays within range_frac of the profile size
    std::size_t window_start = nrec - std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(cfg.steady_window_frac * static_cast<double>(nrec))));
    agg.steady = true;
    agg.steady_fraction.assign(k, 0.0);
    for (std::uint32_t q = 0; q < k; ++q) {
        double lo = agg.mean[window_start][q], hi = lo, sum = 0.0;
        for (std::size_t r = window_start; r < nrec; ++r) {
            lo = std::min(lo, agg.mean[r][q]);
            hi = std::max(hi, agg.mean[r][q]);
            sum += agg.mean[r][q];
        }
        double size = static_cast<double>(std::max<std::size_t>(1, agg.profile_sizes[q]));
        if (hi - lo > cfg.steady_range_frac * size) agg.steady = false;
        agg.steady_fraction[q] = sum / (static_cast<double>(nrec - window_start) * size);
    }
    return result;
}

DivergenceReport compare_to_meanfield(const SimAggregate& agg, const std::vector<double>& mf_p,
                                      const ProfileMap& pm) {
    if (!agg.steady)
        throw std::runtime_error("compare_to_meanfield: simulation did not reach a steady state");
    if (mf_p.size() != pm.node_count())
        throw std::invalid_argument("compare_to_meanfield: state size mismatch");

    DivergenceReport rep;
    const std::uint32_t k = pm.k();
    rep.empirical = agg.steady_fraction;
    rep.model.assign(k, 0.0);
    for (NodeId i = 0; i < pm.node_count(); ++i) rep.model[pm.profile_of(i)] += mf_p[i];
    for (std::uint32_t q = 0; q < k; ++q)
        rep.model[q] /= static_cast<double>(std::max<std::size_t>(1, agg.profile_sizes[q]));

    rep.divergence.resize(k);
    rep.binomial_se.resize(k);
    for (std::uint32_t q = 0; q < k; ++q) {
        rep.divergence[q] = std::abs(rep.empirical[q] - rep.model[q]);
        double phat = std::clamp(rep.empirical[q], 0.0, 1.0);
        double trials = static_cast<double>(std::max<std::size_t>(1, agg.profile_sizes[q]) *
                                            std::max<std::size_t>(1, agg.replications));
        rep.binomial_se[q] = std::sqrt(phat * (1.0 - phat) / trials);
        rep.max_divergence = std::max(rep.max_divergence, rep.divergence[q]);
    }
    return rep;
}

}  // namespace hsis
