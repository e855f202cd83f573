#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rvc/types.hpp"

namespace rvc {

/// Undirected simple graph on nodes 0..n-1. Immutable once built.
class Graph {
public:
    using Edge = std::pair<NodeId, NodeId>;

    Graph() = default;

    /// Throws InvalidArgument on self-loops or ids >= n. Duplicate edges
    /// (in either orientation) collapse to one.
    Graph(std::size_t n, const std::vector<Edge>& edges);

    std::size_t size() const { return adjacency_.size(); }
    std::size_t edge_count() const;

    /// Sorted ascending. Throws InvalidArgument if i >= n.
    const std::vector<NodeId>& neighbors(NodeId i) const;
    std::size_t degree(NodeId i) const { return neighbors(i).size(); }
    bool has_edge(NodeId u, NodeId v) const;

    /// Edges as (u, v) with u < v, sorted lexicographically.
    std::vector<Edge> edges() const;

    bool operator==(const Graph&) const = default;

private:
    std::vector<std::vector<NodeId>> adjacency_;
};

Graph complete_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);

/// Outcome of a robustness check. When `holds` is false, `witness` carries a
/// disjoint pair of nonempty node subsets for which every clause fails.
struct RobustnessReport {
    int r = 0;
    std::optional<int> s;
    bool holds = false;
    std::pair<std::vector<NodeId>, std::vector<NodeId>> witness;
};

/// Largest graph the brute-force checkers accept by default (3^14 assignments).
inline constexpr std::size_t kDefaultEnumerationCap = 14;

RobustnessReport is_r_robust(const Graph& g, int r,
                             std::size_t enumeration_cap = kDefaultEnumerationCap);

RobustnessReport is_rs_robust(const Graph& g, int r, int s,
                              std::size_t enumeration_cap = kDefaultEnumerationCap);

/// Re-checks one candidate pair directly against the (r,s) definition. With
/// s = 1 this is the plain r-robustness condition. Returns true when at least
/// one clause holds for the pair.
bool pair_satisfies(const Graph& g, const std::vector<NodeId>& v1, const std::vector<NodeId>& v2,
                    int r, int s);

/// True iff every node has degree >= (d+1)F+1.
bool check_min_degree(const Graph& g, int d, int faults);

/// Adds one node joined to `new_node_degree` distinct existing nodes picked by
/// a seeded generator. When g is (r,s)-robust and the degree is at least
/// r+s-1, the result is (r,s)-robust as well.
Graph grow_robust_graph(const Graph& g, int r, int s, std::size_t new_node_degree,
                        std::uint64_t seed);

/// Repeatedly applies grow_robust_graph until the graph has `target_n` nodes.
/// Each step uses a seed derived from `seed` and the current node count.
Graph grow_robust_graph_to(const Graph& base, int r, int s, std::size_t new_node_degree,
                           std::size_t target_n, std::uint64_t seed);

// Text format: first non-comment line is n, then one "u v" pair per line.
// '#' starts a comment. Throws ConfigError on malformed input.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);
void write_graph_file(const std::string& path, const Graph& g);

}  // namespace rvc
