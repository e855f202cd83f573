#include "rvc/graph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace rvc {

Graph::Graph(std::size_t n, const std::vector<Edge>& edges) : adjacency_(n) {
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) {
            throw InvalidArgument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                  ") references a node outside 0.." + std::to_string(n) + "-1");
        }
        if (u == v) throw InvalidArgument("self-loop at node " + std::to_string(u));
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& nbrs : adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
}

std::size_t Graph::edge_count() const {
    std::size_t total = 0;
    for (const auto& nbrs : adjacency_) total += nbrs.size();
    return total / 2;
}

const std::vector<NodeId>& Graph::neighbors(NodeId i) const {
    if (i >= adjacency_.size()) {
        throw InvalidArgument("node " + std::to_string(i) + " out of range for graph of size " +
                              std::to_string(adjacency_.size()));
    }
    return adjacency_[i];
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    const auto& nbrs = neighbors(u);
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<Graph::Edge> Graph::edges() const {
    std::vector<Edge> out;
    for (NodeId u = 0; u < adjacency_.size(); ++u) {
        for (NodeId v : adjacency_[u]) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

Graph complete_graph(std::size_t n) {
    std::vector<Graph::Edge> e;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return Graph(n, e);
}

Graph cycle_graph(std::size_t n) {
    if (n < 3) throw InvalidArgument("a cycle needs at least 3 nodes");
    std::vector<Graph::Edge> e;
    for (NodeId u = 0; u < n; ++u) e.emplace_back(u, (u + 1) % n);
    return Graph(n, e);
}

Graph path_graph(std::size_t n) {
    std::vector<Graph::Edge> e;
    for (NodeId u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
    return Graph(n, e);
}

namespace {

constexpr std::size_t kHardMaskLimit = 26;

using Mask = std::uint32_t;

std::vector<NodeId> mask_to_nodes(Mask m) {
    std::vector<NodeId> out;
    for (NodeId i = 0; m; ++i, m >>= 1)
        if (m & 1u) out.push_back(i);
    return out;
}

Mask nodes_to_mask(const std::vector<NodeId>& nodes) {
    Mask m = 0;
    for (NodeId i : nodes) m |= Mask{1} << i;
    return m;
}

std::vector<Mask> adjacency_masks(const Graph& g) {
    std::vector<Mask> adj(g.size(), 0);
    for (NodeId i = 0; i < g.size(); ++i) adj[i] = nodes_to_mask(g.neighbors(i));
    return adj;
}

// reach[M] = number of nodes in M with at least r neighbours outside M.
std::vector<std::uint8_t> reach_table(const std::vector<Mask>& adj, int r) {
    const std::size_t n = adj.size();
    std::vector<std::uint8_t> reach(std::size_t{1} << n, 0);
    for (Mask m = 1; m < (Mask{1} << n); ++m) {
        int count = 0;
        for (Mask rest = m; rest; rest &= rest - 1) {
            const int i = std::countr_zero(rest);
            if (std::popcount(adj[i] & ~m) >= r) ++count;
        }
        reach[m] = static_cast<std::uint8_t>(count);
    }
    return reach;
}

void require_within_cap(const Graph& g, std::size_t cap) {
    if (g.size() > cap || g.size() > kHardMaskLimit) {
        throw EnumerationCapExceeded("graph has " + std::to_string(g.size()) +
                                     " nodes; brute-force robustness check is capped at " +
                                     std::to_string(std::min(cap, kHardMaskLimit)));
    }
}

// Enumerates every ordered pair of disjoint nonempty subsets and stops at the
// first one for which `violates(v1, v2)` is true.
template <class Violates>
RobustnessReport enumerate_pairs(const Graph& g, RobustnessReport report,
                                 Violates violates) {
    const std::size_t n = g.size();
    report.holds = true;
    if (n < 2) return report;
    const Mask full = (Mask{1} << n) - 1;
    for (Mask v1 = 1; v1 < full; ++v1) {
        const Mask comp = full & ~v1;
        for (Mask v2 = comp; v2; v2 = (v2 - 1) & comp) {
            if (violates(v1, v2)) {
                report.holds = false;
                report.witness = {mask_to_nodes(v1), mask_to_nodes(v2)};
                return report;
            }
        }
    }
    return report;
}

void require_positive(int value, const char* name) {
    if (value < 1) throw InvalidArgument(std::string(name) + " must be >= 1");
}

}  // namespace

RobustnessReport is_r_robust(const Graph& g, int r, std::size_t enumeration_cap) {
    require_positive(r, "r");
    require_within_cap(g, enumeration_cap);
    const auto reach = reach_table(adjacency_masks(g), r);
    RobustnessReport base;
    base.r = r;
    return enumerate_pairs(g, base, [&](Mask v1, Mask v2) {
        return reach[v1] == 0 && reach[v2] == 0;
    });
}

RobustnessReport is_rs_robust(const Graph& g, int r, int s, std::size_t enumeration_cap) {
    require_positive(r, "r");
    require_positive(s, "s");
    require_within_cap(g, enumeration_cap);
    const auto reach = reach_table(adjacency_masks(g), r);
    RobustnessReport base;
    base.r = r;
    base.s = s;
    return enumerate_pairs(g, base, [&](Mask v1, Mask v2) {
        const bool all1 = reach[v1] == std::popcount(v1);
        const bool all2 = reach[v2] == std::popcount(v2);
        const bool enough = reach[v1] + reach[v2] >= s;
        return !all1 && !all2 && !enough;
    });
}

bool pair_satisfies(const Graph& g, const std::vector<NodeId>& v1, const std::vector<NodeId>& v2,
                    int r, int s) {
    auto outside_count = [&](NodeId i, const std::vector<NodeId>& own) {
        int count = 0;
        for (NodeId j : g.neighbors(i))
            if (std::find(own.begin(), own.end(), j) == own.end()) ++count;
        return count;
    };
    auto reaching = [&](const std::vector<NodeId>& set) {
        int count = 0;
        for (NodeId i : set)
            if (outside_count(i, set) >= r) ++count;
        return count;
    };
    const int x1 = reaching(v1);
    const int x2 = reaching(v2);
    return x1 == static_cast<int>(v1.size()) || x2 == static_cast<int>(v2.size()) || x1 + x2 >= s;
}

bool check_min_degree(const Graph& g, int d, int faults) {
    const std::size_t need = static_cast<std::size_t>((d + 1) * faults + 1);
    for (NodeId i = 0; i < g.size(); ++i)
        if (g.degree(i) < need) return false;
    return true;
}

Graph grow_robust_graph(const Graph& g, int r, int s, std::size_t new_node_degree,
                        std::uint64_t seed) {
    require_positive(r, "r");
    require_positive(s, "s");
    const std::size_t n = g.size();
    if (new_node_degree > n) {
        throw InvalidArgument("cannot attach a node of degree " + std::to_string(new_node_degree) +
                              " to a graph with " + std::to_string(n) + " nodes");
    }
    if (new_node_degree < static_cast<std::size_t>(r + s - 1)) {
        throw InvalidArgument("new node degree must be at least r+s-1 = " +
                              std::to_string(r + s - 1));
    }
    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    std::mt19937_64 rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(new_node_degree);
    std::sort(pool.begin(), pool.end());

    auto edges = g.edges();
    for (NodeId v : pool) edges.emplace_back(v, n);
    return Graph(n + 1, edges);
}

Graph grow_robust_graph_to(const Graph& base, int r, int s, std::size_t new_node_degree,
                           std::size_t target_n, std::uint64_t seed) {
    Graph g = base;
    while (g.size() < target_n) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(g.size())};
        std::uint64_t step_seed = 0;
        std::uint32_t words[2];
        seq.generate(words, words + 2);
        step_seed = (std::uint64_t{words[0]} << 32) | words[1];
        g = grow_robust_graph(g, r, s, new_node_degree, step_seed);
    }
    return g;
}

Graph read_graph(std::istream& in) {
    std::optional<std::size_t> n;
    std::vector<Graph::Edge> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<long long> tokens;
        std::string tok;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                long long v = std::stoll(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                tokens.push_back(v);
            } catch (const std::exception&) {
                throw ConfigError("graph line " + std::to_string(lineno) + ": bad token '" + tok +
                                  "'");
            }
        }
        if (tokens.empty()) continue;
        if (!n) {
            if (tokens.size() != 1 || tokens[0] < 0)
                throw ConfigError("graph line " + std::to_string(lineno) +
                                  ": expected a single node count");
            n = static_cast<std::size_t>(tokens[0]);
            continue;
        }
        if (tokens.size() != 2 || tokens[0] < 0 || tokens[1] < 0)
            throw ConfigError("graph line " + std::to_string(lineno) + ": expected 'u v'");
        edges.emplace_back(static_cast<NodeId>(tokens[0]), static_cast<NodeId>(tokens[1]));
    }
    if (!n) throw ConfigError("graph file has no node count");
    try {
        return Graph(*n, edges);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("graph file: ") + e.what());
    }
}

Graph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open graph file " + path);
    return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
    out << g.size() << '\n';
    for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

void write_graph_file(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write graph file " + path);
    write_graph(out, g);
}

}  // namespace rvc
