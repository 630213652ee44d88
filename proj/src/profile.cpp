#include "hsis/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "hsis/rng.hpp"

namespace hsis {

ProfileParams::ProfileParams(std::vector<ProfileRates> rates) : rates_(std::move(rates)) {
    if (rates_.empty()) throw std::invalid_argument("ProfileParams: need at least one profile");
    for (std::size_t q = 0; q < rates_.size(); ++q) {
        const auto& r = rates_[q];
        if (!(r.beta > 0.0 && r.beta <= 1.0) || !(r.delta > 0.0 && r.delta <= 1.0)) {
            std::ostringstream msg;
            msg << "ProfileParams: profile " << q << " rates must lie in (0,1], got beta="
                << r.beta << " delta=" << r.delta;
            throw std::invalid_argument(msg.str());
        }
    }
}

ProfileParams ProfileParams::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("profiles") || !j["profiles"].is_array())
        throw std::invalid_argument("ProfileParams: expected {\"profiles\":[{\"beta\":..,\"delta\":..},..]}");
    std::vector<ProfileRates> rates;
    for (const auto& p : j["profiles"])
        rates.push_back({p.at("beta").get<double>(), p.at("delta").get<double>()});
    return ProfileParams(std::move(rates));
}

ProfileParams ProfileParams::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open params file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::string ProfileParams::to_json_text() const {
    nlohmann::json j;
    j["profiles"] = nlohmann::json::array();
    for (const auto& r : rates_)
        j["profiles"].push_back({{"beta", r.beta}, {"delta", r.delta}});
    return j.dump();
}

ProfileMap::ProfileMap(std::vector<std::uint32_t> assignment, std::uint32_t k)
    : assignment_(std::move(assignment)), k_(k) {
    if (k_ == 0) throw std::invalid_argument("ProfileMap: k must be positive");
    for (auto p : assignment_)
        if (p >= k_) throw std::invalid_argument("ProfileMap: profile id out of range");
}

std::vector<std::size_t> ProfileMap::profile_sizes() const {
    std::vector<std::size_t> sizes(k_, 0);
    for (auto p : assignment_) ++sizes[p];
    return sizes;
}

std::vector<std::uint32_t> ProfileMap::unused_profiles() const {
    auto sizes = profile_sizes();
    std::vector<std::uint32_t> unused;
    for (std::uint32_t q = 0; q < k_; ++q)
        if (sizes[q] == 0) unused.push_back(q);
    return unused;
}

ProfileMap assign_random_split(const Graph& g, std::uint32_t k, std::uint64_t seed) {
    if (k == 0) throw std::invalid_argument("assign_random_split: k must be positive");
    if (g.node_count() < k)
        throw std::invalid_argument("assign_random_split: more profiles than nodes");
    std::vector<NodeId> order(g.node_count());
    for (NodeId i = 0; i < order.size(); ++i) order[i] = i;
    rng::Engine eng(rng::derive_seed(seed, 3));
    rng::shuffle(order, eng);
    // round-robin over the shuffled order keeps sizes within 1 of each other
    std::vector<std::uint32_t> assignment(g.node_count());
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        assignment[order[pos]] = static_cast<std::uint32_t>(pos % k);
    return ProfileMap(std::move(assignment), k);
}

AttributeAssignResult assign_by_attribute(const Graph& g, const std::string& attr_csv_path,
                                          const std::vector<double>& bins,
                                          const std::vector<std::int64_t>* original_ids) {
    for (std::size_t i = 1; i < bins.size(); ++i)
        if (!(bins[i - 1] < bins[i]))
            throw std::invalid_argument("assign_by_attribute: bins must be strictly increasing");

    std::unordered_map<std::int64_t, NodeId> to_dense;
    if (original_ids) {
        for (NodeId d = 0; d < original_ids->size(); ++d) to_dense[(*original_ids)[d]] = d;
    }

    std::ifstream in(attr_csv_path);
    if (!in) throw std::runtime_error("cannot open attribute file: " + attr_csv_path);

    const double unset = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> attr(g.node_count(), unset);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (line_no == 1 && line.find_first_not_of("0123456789.,-eE+ \t\r") != std::string::npos)
            continue;  // header
        std::string fixed = line;
        std::replace(fixed.begin(), fixed.end(), ',', ' ');
        std::istringstream ss(fixed);
        std::int64_t id;
        double value;
        if (!(ss >> id >> value)) {
            std::ostringstream msg;
            msg << attr_csv_path << ":" << line_no << ": expected 'node_id,value'";
            throw std::runtime_error(msg.str());
        }
        NodeId d;
        if (original_ids) {
            auto it = to_dense.find(id);
            if (it == to_dense.end()) continue;  // attribute for a node not in the graph
            d = it->second;
        } else {
            if (id < 0 || static_cast<std::size_t>(id) >= g.node_count()) continue;
            d = static_cast<NodeId>(id);
        }
        attr[d] = value;
    }

    std::vector<NodeId> keep;
    for (NodeId i = 0; i < g.node_count(); ++i)
        if (!std::isnan(attr[i])) keep.push_back(i);
    if (keep.empty())
        throw std::runtime_error("assign_by_attribute: no node has an attribute value");

    // value < bins[0] -> profile 0, bins[q-1] <= value < bins[q] -> profile q
    const std::uint32_t k = static_cast<std::uint32_t>(bins.size() + 1);
    std::vector<std::uint32_t> assignment(keep.size());
    for (NodeId d = 0; d < keep.size(); ++d) {
        double v = attr[keep[d]];
        assignment[d] = static_cast<std::uint32_t>(
            std::upper_bound(bins.begin(), bins.end(), v) - bins.begin());
    }

    AttributeAssignResult res{induced_subgraph(g, keep), ProfileMap(std::move(assignment), k),
                              std::move(keep), g.node_count(), {}};
    res.dropped_nodes -= res.kept_nodes.size();
    res.empty_bins = res.profiles.unused_profiles();
    return res;
}

SystemMatrices build_matrices(const ProfileMap& pm, const ProfileParams& params) {
    if (pm.k() > params.k())
        throw std::invalid_argument("build_matrices: profile map uses ids the params do not define");
    SystemMatrices sm;
    sm.delta.resize(pm.node_count());
    sm.beta.resize(pm.node_count());
    for (NodeId i = 0; i < pm.node_count(); ++i) {
        const auto& r = params.rates(pm.profile_of(i));
        sm.delta[i] = r.delta;
        sm.beta[i] = r.beta;
    }
    return sm;
}

}  // namespace hsis
