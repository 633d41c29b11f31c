#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "snav/error.hpp"

namespace snav {

using NodeId = int;

inline constexpr int kMaxNodes = 64;

/// Undirected edge stored with u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    static Edge make(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }
    bool contains(NodeId x) const { return u == x || v == x; }
    NodeId other(NodeId x) const { return x == u ? v : u; }

    auto operator<=>(const Edge&) const = default;
};

/// Simple, connected, undirected graph. Immutable once built; only validate_graph
/// (or Graph::create) constructs one.
class Graph {
public:
    /// Throws Error{SelfLoop | NodeOutOfRange | TooManyNodes | Disconnected}.
    static Graph create(int n_nodes, std::span<const std::pair<int, int>> edges);

    int n_nodes() const { return n_nodes_; }
    std::size_t n_edges() const { return edges_.size(); }

    /// Edges in ascending (u, v) order.
    const std::vector<Edge>& edges() const { return edges_; }

    /// Neighbors of x in ascending id order.
    const std::vector<NodeId>& neighbors(NodeId x) const { return adjacency_[static_cast<std::size_t>(x)]; }

    int degree(NodeId x) const { return static_cast<int>(neighbors(x).size()); }
    bool has_edge(NodeId a, NodeId b) const;
    bool contains(NodeId x) const { return x >= 0 && x < n_nodes_; }

    /// Graph with node x renamed to perm[x].
    Graph relabeled(std::span<const NodeId> perm) const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_nodes_ == b.n_nodes_ && a.edges_ == b.edges_;
    }

private:
    Graph(int n, std::vector<Edge> edges);

    int n_nodes_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<NodeId>> adjacency_;
};

struct Query {
    NodeId source = 0;
    NodeId target = 0;

    auto operator<=>(const Query&) const = default;
};

/// An ordered node sequence. Length is the number of nodes, never hops.
struct Path {
    std::vector<NodeId> nodes;

    std::size_t length() const { return nodes.size(); }
    auto operator<=>(const Path&) const = default;
};

struct ShortestPaths {
    std::vector<Path> paths;  // lexicographically sorted
    bool truncated = false;
};

inline constexpr std::size_t kMaxShortestPaths = 10'000;

/// Validates a candidate graph. Duplicate and symmetric listings collapse to one edge.
Graph validate_graph(int n_nodes, std::span<const std::pair<int, int>> edges);

/// Throws InvalidArgument unless both endpoints are in range and distinct.
void check_query(const Graph& g, Query q);

/// Hop distances from source to every node.
std::vector<int> bfs_distances(const Graph& g, NodeId source);

/// Node count of a shortest path: 1 + hop distance.
int bfs_shortest_length(const Graph& g, Query q);

/// Every shortest path for the query, expanded from the BFS predecessor DAG.
/// Stops after `cap` paths and sets `truncated`.
ShortestPaths all_shortest_paths(const Graph& g, Query q, std::size_t cap = kMaxShortestPaths);

/// True iff the sequence walks graph edges, never repeats a node and has >= 2 nodes.
bool is_valid_path(const Graph& g, const Path& p);

bool is_connected(int n_nodes, std::span<const Edge> edges);

/// Textual form: "n m" followed by m lines "u v".
Graph read_graph_text(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph_text(std::ostream& out, const Graph& g);

}  // namespace snav
