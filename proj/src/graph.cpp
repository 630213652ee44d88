#include "hsis/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "hsis/profile.hpp"
#include "hsis/rng.hpp"

namespace hsis {

namespace {

std::uint64_t edge_key(NodeId a, NodeId b, std::size_t n) {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(a) * n + b;
}

}  // namespace

Graph Graph::from_edges(std::size_t node_count,
                        const std::vector<std::pair<NodeId, NodeId>>& edges) {
    Graph g;
    g.adj_.assign(node_count, {});
    for (auto [a, b] : edges) {
        if (a >= node_count || b >= node_count)
            throw std::invalid_argument("Graph::from_edges: node id out of range");
        if (a == b) continue;
        g.adj_[a].push_back(b);
        g.adj_[b].push_back(a);
    }
    g.edge_count_ = 0;
    for (auto& nbrs : g.adj_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        g.edge_count_ += nbrs.size();
    }
    g.edge_count_ /= 2;
    return g;
}

bool Graph::has_edge(NodeId i, NodeId j) const {
    const auto& nbrs = adj_[i];
    return std::binary_search(nbrs.begin(), nbrs.end(), j);
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count_);
    for (NodeId i = 0; i < adj_.size(); ++i)
        for (NodeId j : adj_[i])
            if (i < j) out.emplace_back(i, j);
    return out;
}

LoadResult load_edge_list(const std::string& path, EdgeListFormat format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path);

    std::unordered_map<std::int64_t, NodeId> dense;
    std::vector<std::int64_t> original;
    std::vector<std::pair<NodeId, NodeId>> raw_edges;
    std::size_t self_loops = 0;

    auto intern = [&](std::int64_t id) -> NodeId {
        auto it = dense.find(id);
        if (it != dense.end()) return it->second;
        NodeId d = static_cast<NodeId>(original.size());
        dense.emplace(id, d);
        original.push_back(id);
        return d;
    };

    std::string line;
    std::size_t line_no = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#' || line[0] == '%') continue;

        std::int64_t a, b;
        if (format == EdgeListFormat::csv) {
            // optional "src,dst" header
            if (first_data_line && line.find_first_not_of("0123456789,- \t\r") != std::string::npos) {
                first_data_line = false;
                continue;
            }
            std::string fixed = line;
            std::replace(fixed.begin(), fixed.end(), ',', ' ');
            std::istringstream ss(fixed);
            std::string trailing;
            if (!(ss >> a >> b) || (ss >> trailing)) {
                std::ostringstream msg;
                msg << path << ":" << line_no << ": expected 'src,dst', got '" << line << "'";
                throw std::runtime_error(msg.str());
            }
        } else {
            std::istringstream ss(line);
            if (!(ss >> a >> b)) {
                std::ostringstream msg;
                msg << path << ":" << line_no << ": expected two integer tokens, got '" << line << "'";
                throw std::runtime_error(msg.str());
            }
        }
        first_data_line = false;
        if (a == b) {
            ++self_loops;
            continue;
        }
        NodeId da = intern(a);  // sequenced: interning order defines the dense ids
        NodeId db = intern(b);
        raw_edges.emplace_back(da, db);
    }

    if (original.empty())
        throw std::runtime_error("edge list yields an empty graph: " + path);

    LoadResult res;
    res.graph = Graph::from_edges(original.size(), raw_edges);
    res.original_ids = std::move(original);
    res.self_loops_dropped = self_loops;
    res.duplicates_collapsed = raw_edges.size() - res.graph.edge_count();

    auto comp = connected_components(res.graph);
    res.component_count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    res.connected = res.component_count <= 1;
    return res;
}

void write_edge_list_snap(const Graph& g, const std::string& path,
                          const std::vector<std::string>& header_comments) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write edge list: " + path);
    for (const auto& c : header_comments) out << "# " << c << "\n";
    out << "# nodes " << g.node_count() << " edges " << g.edge_count() << "\n";
    for (NodeId i = 0; i < g.node_count(); ++i)
        for (NodeId j : g.neighbors(i))
            if (i < j) out << i << "\t" << j << "\n";
}

void write_remap_csv(const std::vector<std::int64_t>& original_ids, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write remap table: " + path);
    out << "original_id,dense_id\n";
    for (std::size_t d = 0; d < original_ids.size(); ++d)
        out << original_ids[d] << "," << d << "\n";
}

Graph gen_clique(std::size_t n) {
    if (n < 2) throw std::invalid_argument("gen_clique: need n >= 2");
    Graph g;
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(n * (n - 1) / 2);
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Graph::from_edges(n, edges);
}

Graph gen_powerlaw(std::size_t n, double exponent, double scale, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_powerlaw: need n >= 2");
    if (exponent <= 1.0) throw std::invalid_argument("gen_powerlaw: need exponent > 1");

    std::size_t k_max = n - 1;
    if (scale > 0 && scale < static_cast<double>(k_max))
        k_max = std::max<std::size_t>(1, static_cast<std::size_t>(scale));

    rng::Engine eng(rng::derive_seed(seed, 1));
    // cumulative table for P(k) ~ k^-exponent, k in [1, k_max]
    std::vector<double> cum(k_max);
    double sum = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        sum += std::pow(static_cast<double>(k), -exponent);
        cum[k - 1] = sum;
    }
    for (double& c : cum) c /= sum;
    cum.back() = 1.0;

    std::vector<std::uint32_t> deg(n);
    std::uint64_t stub_total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double u = eng.next_u01();
        auto it = std::lower_bound(cum.begin(), cum.end(), u);
        deg[i] = static_cast<std::uint32_t>(it - cum.begin()) + 1;
        stub_total += deg[i];
    }
    if (stub_total % 2 != 0) {
        // drop one stub from a max-degree node to make the sum even
        auto it = std::max_element(deg.begin(), deg.end());
        --(*it);
        --stub_total;
    }

    std::vector<NodeId> stubs;
    stubs.reserve(stub_total);
    for (NodeId i = 0; i < n; ++i)
        for (std::uint32_t s = 0; s < deg[i]; ++s) stubs.push_back(i);
    rng::shuffle(stubs, eng);

    std::unordered_set<std::uint64_t> edge_set;
    std::vector<std::pair<NodeId, NodeId>> good;
    std::vector<NodeId> pool = std::move(stubs);

    const int max_passes = 100;
    for (int pass = 0; pass < max_passes && !pool.empty(); ++pass) {
        if (pass > 0) {
            // break up some accepted pairs to give the bad stubs new partners
            std::size_t recycle = std::min(good.size(), pool.size());
            for (std::size_t r = 0; r < recycle; ++r) {
                std::size_t idx = static_cast<std::size_t>(eng.below(good.size()));
                auto [a, b] = good[idx];
                edge_set.erase(edge_key(a, b, n));
                pool.push_back(a);
                pool.push_back(b);
                good[idx] = good.back();
                good.pop_back();
            }
            rng::shuffle(pool, eng);
        }
        std::vector<NodeId> rejected;
        for (std::size_t t = 0; t + 1 < pool.size(); t += 2) {
            NodeId a = pool[t], b = pool[t + 1];
            if (a == b || !edge_set.insert(edge_key(a, b, n)).second) {
                rejected.push_back(a);
                rejected.push_back(b);
            } else {
                good.emplace_back(a, b);
            }
        }
        pool = std::move(rejected);
    }
    if (!pool.empty())
        throw std::runtime_error("gen_powerlaw: could not realize a simple graph for the drawn "
                                 "degree sequence after 100 rewiring passes");

    return Graph::from_edges(n, good);
}

Graph gen_erdos_renyi(std::size_t n, double edge_prob, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_erdos_renyi: need n >= 1");
    if (edge_prob < 0.0 || edge_prob > 1.0)
        throw std::invalid_argument("gen_erdos_renyi: edge_prob must be in [0,1]");
    rng::Engine eng(rng::derive_seed(seed, 2));
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (eng.next_u01() < edge_prob) edges.emplace_back(i, j);
    return Graph::from_edges(n, edges);
}

std::vector<std::uint32_t> connected_components(const Graph& g) {
    const std::uint32_t unvisited = ~std::uint32_t{0};
    std::vector<std::uint32_t> label(g.node_count(), unvisited);
    std::uint32_t next = 0;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        if (label[s] != unvisited) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (NodeId w : g.neighbors(v)) {
                if (label[w] == unvisited) {
                    label[w] = next;
                    stack.push_back(w);
                }
            }
        }
        ++next;
    }
    return label;
}

std::vector<NodeId> largest_component(const Graph& g) {
    auto label = connected_components(g);
    if (label.empty()) return {};
    std::uint32_t ncomp = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<std::size_t> size(ncomp, 0);
    for (auto l : label) ++size[l];
    std::uint32_t best = static_cast<std::uint32_t>(
        std::max_element(size.begin(), size.end()) - size.begin());
    std::vector<NodeId> keep;
    for (NodeId i = 0; i < label.size(); ++i)
        if (label[i] == best) keep.push_back(i);
    return keep;
}

Graph induced_subgraph(const Graph& g, const std::vector<NodeId>& keep,
                       std::vector<NodeId>* old_to_new) {
    const NodeId npos = ~NodeId{0};
    std::vector<NodeId> map(g.node_count(), npos);
    for (NodeId d = 0; d < keep.size(); ++d) map[keep[d]] = d;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId old_i : keep)
        for (NodeId old_j : g.neighbors(old_i))
            if (old_i < old_j && map[old_j] != npos)
                edges.emplace_back(map[old_i], map[old_j]);
    if (old_to_new) *old_to_new = map;
    return Graph::from_edges(keep.size(), edges);
}

DegreeProfile degrees(const Graph& g, const ProfileMap& pm) {
    if (pm.node_count() != g.node_count())
        throw std::invalid_argument("degrees: profile map does not cover all nodes");
    DegreeProfile dp;
    dp.k = pm.k();
    dp.total.resize(g.node_count());
    dp.by_profile.assign(g.node_count() * dp.k, 0);
    dp.profile = pm.assignment();
    for (NodeId i = 0; i < g.node_count(); ++i) {
        dp.total[i] = static_cast<std::uint32_t>(g.degree(i));
        for (NodeId j : g.neighbors(i))
            ++dp.by_profile[static_cast<std::size_t>(i) * dp.k + pm.profile_of(j)];
    }
    return dp;
}

}  // namespace hsis
