#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hsis {

using NodeId = std::uint32_t;

class ProfileMap;

/// Undirected simple graph over dense node ids 0..node_count()-1.
/// Neighbor lists are sorted; no self-loops, no duplicate edges.
/// Immutable after construction, safe for concurrent reads.
class Graph {
public:
    Graph() = default;

    /// Builds from an edge list; self-loops are dropped and duplicate /
    /// reversed edges collapsed.
    static Graph from_edges(std::size_t node_count,
                            const std::vector<std::pair<NodeId, NodeId>>& edges);

    std::size_t node_count() const { return adj_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    const std::vector<NodeId>& neighbors(NodeId i) const { return adj_[i]; }
    std::size_t degree(NodeId i) const { return adj_[i].size(); }
    bool has_edge(NodeId i, NodeId j) const;

    /// Edges as (i, j) pairs with i < j, ordered lexicographically.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

private:
    std::vector<std::vector<NodeId>> adj_;
    std::size_t edge_count_ = 0;
};

enum class EdgeListFormat { snap, csv };

struct LoadResult {
    Graph graph;
    std::vector<std::int64_t> original_ids;  // dense id -> original id
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_collapsed = 0;
    bool connected = true;
    std::size_t component_count = 1;
};

/// Reads a whitespace ("snap", `#` comments) or comma ("csv", optional
/// src,dst header) separated edge list. Node ids are remapped to dense
/// 0-based integers in order of first appearance; the mapping is returned.
/// Throws on malformed lines (with line number) and on an empty graph.
LoadResult load_edge_list(const std::string& path, EdgeListFormat format);

void write_edge_list_snap(const Graph& g, const std::string& path,
                          const std::vector<std::string>& header_comments = {});

/// Emits the node-id remap table as CSV `original_id,dense_id`.
void write_remap_csv(const std::vector<std::int64_t>& original_ids, const std::string& path);

/// Complete graph on n >= 2 nodes.
Graph gen_clique(std::size_t n);

/// Configuration model on an i.i.d. power-law degree sequence,
/// P(k) proportional to k^-exponent for 1 <= k <= min(n-1, scale).
/// Self-loops and multi-edges are repaired by re-wiring, up to 100 passes;
/// an unrealizable sequence raises after that. scale <= 0 means no cap
/// beyond n-1. Deterministic for fixed (n, exponent, scale, seed).
Graph gen_powerlaw(std::size_t n, double exponent, double scale, std::uint64_t seed);

/// G(n, p) with each pair included independently.
Graph gen_erdos_renyi(std::size_t n, double edge_prob, std::uint64_t seed);

/// Per-node component labels, 0-based, in order of discovery from node 0.
std::vector<std::uint32_t> connected_components(const Graph& g);

/// Sorted node ids of the largest connected component.
std::vector<NodeId> largest_component(const Graph& g);

/// Subgraph induced by `keep` (sorted unique ids); if `old_to_new` is given
/// it receives a node_count-sized map with npos = UINT32_MAX for dropped nodes.
Graph induced_subgraph(const Graph& g, const std::vector<NodeId>& keep,
                       std::vector<NodeId>* old_to_new = nullptr);

/// Per-node degrees, total and split by the profile of the neighbor.
struct DegreeProfile {
    std::vector<std::uint32_t> total;            // d(i)
    std::vector<std::uint32_t> by_profile;       // row-major n x k
    std::vector<std::uint32_t> profile;          // the node's own profile
    std::uint32_t k = 0;

    std::uint32_t of(NodeId i, std::uint32_t neighbor_profile) const {
        return by_profile[static_cast<std::size_t>(i) * k + neighbor_profile];
    }
};

/// Splits every node's degree by neighbor profile; splits sum to totals.
DegreeProfile degrees(const Graph& g, const ProfileMap& pm);

}  // namespace hsis
