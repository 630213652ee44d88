#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsis/graph.hpp"

namespace hsis {

struct ProfileRates {
    double beta;   // infection rate, in (0,1]
    double delta;  // healing rate, in (0,1]
};

/// Per-profile SIS rates, profile ids 0..k-1. Strict positivity is enforced
/// at construction; the (0,1] bound lets the same rates drive both the ODE
/// engines and the per-round stochastic simulator.
class ProfileParams {
public:
    explicit ProfileParams(std::vector<ProfileRates> rates);

    static ProfileParams from_json_file(const std::string& path);
    static ProfileParams from_json_text(const std::string& text);
    std::string to_json_text() const;

    std::uint32_t k() const { return static_cast<std::uint32_t>(rates_.size()); }
    const ProfileRates& rates(std::uint32_t profile) const { return rates_.at(profile); }
    const std::vector<ProfileRates>& all() const { return rates_; }

private:
    std::vector<ProfileRates> rates_;
};

/// Node -> profile assignment. Every node maps to a valid id < k; empty
/// profiles are allowed (parameter sweeps produce them) but discoverable
/// through unused_profiles().
class ProfileMap {
public:
    ProfileMap(std::vector<std::uint32_t> assignment, std::uint32_t k);

    std::uint32_t k() const { return k_; }
    std::size_t node_count() const { return assignment_.size(); }
    std::uint32_t profile_of(NodeId i) const { return assignment_[i]; }
    const std::vector<std::uint32_t>& assignment() const { return assignment_; }

    std::vector<std::size_t> profile_sizes() const;
    std::vector<std::uint32_t> unused_profiles() const;

private:
    std::vector<std::uint32_t> assignment_;
    std::uint32_t k_;
};

/// Random split into k near-equal profiles (sizes differ by at most 1).
/// Deterministic for a fixed seed.
ProfileMap assign_random_split(const Graph& g, std::uint32_t k, std::uint64_t seed);

struct AttributeAssignResult {
    Graph graph;                      // induced subgraph of nodes with attributes
    ProfileMap profiles;              // assignment on the induced subgraph
    std::vector<NodeId> kept_nodes;   // new dense id -> old dense id
    std::size_t dropped_nodes = 0;
    std::vector<std::uint32_t> empty_bins;
};

/// Bins nodes by a per-node numeric attribute (CSV `node_id,value`), using
/// strictly increasing thresholds: value < bins[0] -> profile 0, ...,
/// value >= bins.back() -> profile bins.size(). Nodes without an attribute
/// are dropped and the induced subgraph returned. `original_ids` maps dense
/// ids back to the ids used in the attribute file (pass the loader's table
/// when the graph came from a file; nullptr means the file uses dense ids).
AttributeAssignResult assign_by_attribute(const Graph& g, const std::string& attr_csv_path,
                                          const std::vector<double>& bins,
                                          const std::vector<std::int64_t>* original_ids = nullptr);

/// Diagonals of the healing / infection rate matrices, one entry per node.
struct SystemMatrices {
    std::vector<double> delta;
    std::vector<double> beta;

    std::size_t node_count() const { return delta.size(); }
};

/// Expands per-profile rates to per-node diagonals. Throws if the map uses a
/// profile id the params do not define.
SystemMatrices build_matrices(const ProfileMap& pm, const ProfileParams& params);

}  // namespace hsis
