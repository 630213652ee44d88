#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsis/profile.hpp"
#include "hsis/sim.hpp"

namespace hsis {

/// Named experiment bundles at desk scale by default; full_scale switches to
/// the original sizes (the arbitrary-graph scenarios then need an external
/// edge-list file).
struct ScenarioOptions {
    bool full_scale = false;
    std::optional<std::string> graph_path;  // external edge list for full-scale arbitrary runs
    std::optional<std::size_t> replications;
    std::optional<std::size_t> rounds;
    std::uint64_t rng_seed = 42;
};

struct ScenarioRun {
    std::string name;
    bool full_scale = false;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::vector<std::uint32_t> profile_assignment;
    std::uint32_t profile_count = 0;
    std::vector<ProfileRates> rates;
    SimConfig cfg;
    SimResult sim;
    std::string predicate;   // human-readable acceptance predicate
    std::string detail;      // measured values
    bool pass = false;
    std::vector<std::string> notes;  // e.g. which rates are derived vs quoted
};

const std::vector<std::string>& scenario_names();

/// Runs a named scenario and evaluates its acceptance predicate.
/// Throws std::invalid_argument for unknown names (message lists the valid
/// ones) and std::runtime_error when full-scale needs a graph file.
ScenarioRun run_scenario(const std::string& name, const ScenarioOptions& opt);

}  // namespace hsis
