#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsis/graph.hpp"
#include "hsis/profile.hpp"

namespace hsis {

/// Which nodes start infected.
struct SeedSpec {
    enum class Kind { top_degree_fraction, bottom_degree_fraction, fixed_per_profile, explicit_nodes };

    Kind kind = Kind::top_degree_fraction;
    double fraction = 0.05;            // for the degree-fraction kinds
    std::size_t per_profile = 0;       // for fixed_per_profile
    std::vector<NodeId> nodes;         // for explicit_nodes

    static SeedSpec top_degree(double fraction);
    static SeedSpec bottom_degree(double fraction);
    static SeedSpec per_profile_count(std::size_t count);
    static SeedSpec explicit_list(std::vector<NodeId> nodes);
};

struct SimConfig {
    std::size_t rounds = 2000;
    SeedSpec seeding;
    std::size_t replications = 1;
    std::uint64_t rng_seed = 0;
    std::size_t record_every = 1;
    // steady state: trailing window of the run where per-profile counts stay
    // within range_frac of the profile size
    double steady_window_frac = 0.2;
    double steady_range_frac = 0.02;
};

/// Per-replication trace: per-recorded-round infected counts per profile.
struct SimTrace {
    std::vector<std::size_t> recorded_rounds;
    std::vector<std::vector<std::uint32_t>> counts;  // [recorded][profile]
    std::vector<std::uint32_t> totals;               // per recorded round
    std::vector<std::uint8_t> final_state;
    std::uint64_t rng_seed = 0;
    std::optional<std::size_t> absorbed_round;        // first round with 0 infected
    std::vector<double> trailing_mean_fraction;       // per profile, over the steady window
};

struct SimAggregate {
    std::vector<std::size_t> recorded_rounds;
    std::vector<std::vector<double>> mean;  // [recorded][profile]
    std::vector<std::vector<double>> stddev;
    std::vector<std::size_t> profile_sizes;
    std::size_t replications = 0;
    bool steady = false;                     // on the aggregate mean trace
    std::vector<double> steady_fraction;     // per profile, trailing-window mean / size
};

struct SimResult {
    std::vector<SimTrace> traces;
    SimAggregate aggregate;
    std::vector<NodeId> initial_infected;
};

/// Resolves a seed spec to a sorted node set. Degree fractions take
/// ceil(fraction * n) nodes, breaking degree ties by node id; the random
/// per-profile choice is deterministic under the seed.
std::vector<NodeId> seed_infection(const Graph& g, const ProfileMap& pm, const SeedSpec& spec,
                                   std::uint64_t rng_seed);

/// One synchronous round: reading the round-start state, a susceptible node j
/// with m infected neighbors becomes infected with probability
/// 1 - (1 - beta_j)^m, and an infected node heals with probability delta_i.
/// Each node consumes one uniform, a pure function of (seed, round, node),
/// with healing on the bottom of the interval and infection on the top so
/// that runs sharing a seed couple monotonically in beta.
std::vector<std::uint8_t> sim_step(const Graph& g, const SystemMatrices& rates,
                                   const std::vector<std::uint8_t>& state, std::uint64_t seed,
                                   std::uint64_t round);

/// Runs cfg.replications independent replications (sub-seeds derived from the
/// master seed) and aggregates per-round per-profile means and deviations.
SimResult run_simulation(const Graph& g, const ProfileMap& pm, const ProfileParams& params,
                         const SimConfig& cfg);

struct DivergenceReport {
    std::vector<double> empirical;    // per profile steady fraction
    std::vector<double> model;        // mean of the mean-field p over the profile
    std::vector<double> divergence;   // |empirical - model|
    std::vector<double> binomial_se;
    double max_divergence = 0.0;
};

/// Per-profile gap between the simulated steady fractions and a mean-field
/// state. Throws if the aggregate did not reach a steady state.
DivergenceReport compare_to_meanfield(const SimAggregate& agg, const std::vector<double>& mf_p,
                                      const ProfileMap& pm);

}  // namespace hsis
