#include "snav/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

namespace snav {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::Disconnected: return "Disconnected";
        case ErrorCode::NodeOutOfRange: return "NodeOutOfRange";
        case ErrorCode::TooManyNodes: return "TooManyNodes";
        case ErrorCode::UnsupportedSize: return "UnsupportedSize";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::SizeMismatch: return "SizeMismatch";
        case ErrorCode::TooFewEdges: return "TooFewEdges";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::KOutOfRange: return "KOutOfRange";
        case ErrorCode::DeadEnd: return "DeadEnd";
        case ErrorCode::NodeLabelOutOfVocab: return "NodeLabelOutOfVocab";
        case ErrorCode::MalformedSequence: return "MalformedSequence";
        case ErrorCode::EmptySplit: return "EmptySplit";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

Graph::Graph(int n, std::vector<Edge> edges) : n_nodes_(n), edges_(std::move(edges)) {
    adjacency_.resize(static_cast<std::size_t>(n));
    for (const Edge& e : edges_) {
        adjacency_[static_cast<std::size_t>(e.u)].push_back(e.v);
        adjacency_[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

Graph Graph::create(int n_nodes, std::span<const std::pair<int, int>> edges) {
    if (n_nodes < 2 || n_nodes > kMaxNodes) {
        throw Error(ErrorCode::TooManyNodes, "node count " + std::to_string(n_nodes) + " outside [2, 64]");
    }
    std::vector<Edge> list;
    list.reserve(edges.size());
    for (const auto& [a, b] : edges) {
        if (a < 0 || a >= n_nodes || b < 0 || b >= n_nodes) {
            throw Error(ErrorCode::NodeOutOfRange,
                        "edge (" + std::to_string(a) + "," + std::to_string(b) + ") with n=" + std::to_string(n_nodes));
        }
        if (a == b) throw Error(ErrorCode::SelfLoop, "self-loop at node " + std::to_string(a));
        list.push_back(Edge::make(a, b));
    }
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    if (!is_connected(n_nodes, list)) {
        throw Error(ErrorCode::Disconnected, "BFS from node 0 does not reach every node");
    }
    return Graph(n_nodes, std::move(list));
}

bool Graph::has_edge(NodeId a, NodeId b) const {
    if (!contains(a) || !contains(b)) return false;
    const auto& nbrs = neighbors(a);
    return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

Graph Graph::relabeled(std::span<const NodeId> perm) const {
    if (perm.size() != static_cast<std::size_t>(n_nodes_)) {
        throw Error(ErrorCode::SizeMismatch, "permutation size differs from node count");
    }
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (const Edge& e : edges_) {
        out.push_back(Edge::make(perm[static_cast<std::size_t>(e.u)], perm[static_cast<std::size_t>(e.v)]));
    }
    std::sort(out.begin(), out.end());
    return Graph(n_nodes_, std::move(out));
}

Graph validate_graph(int n_nodes, std::span<const std::pair<int, int>> edges) {
    return Graph::create(n_nodes, edges);
}

bool is_connected(int n_nodes, std::span<const Edge> edges) {
    if (n_nodes <= 0) return false;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_nodes));
    for (const Edge& e : edges) {
        adj[static_cast<std::size_t>(e.u)].push_back(e.v);
        adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    std::vector<char> seen(static_cast<std::size_t>(n_nodes), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        for (int y : adj[static_cast<std::size_t>(x)]) {
            if (!seen[static_cast<std::size_t>(y)]) {
                seen[static_cast<std::size_t>(y)] = 1;
                ++reached;
                stack.push_back(y);
            }
        }
    }
    return reached == n_nodes;
}

void check_query(const Graph& g, Query q) {
    if (!g.contains(q.source) || !g.contains(q.target)) {
        throw Error(ErrorCode::NodeOutOfRange, "query endpoint outside graph");
    }
    if (q.source == q.target) throw Error(ErrorCode::InvalidArgument, "query source equals target");
}

std::vector<int> bfs_distances(const Graph& g, NodeId source) {
    std::vector<int> dist(static_cast<std::size_t>(g.n_nodes()), -1);
    std::queue<NodeId> frontier;
    dist[static_cast<std::size_t>(source)] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        const NodeId x = frontier.front();
        frontier.pop();
        for (NodeId y : g.neighbors(x)) {
            if (dist[static_cast<std::size_t>(y)] < 0) {
                dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
                frontier.push(y);
            }
        }
    }
    return dist;
}

int bfs_shortest_length(const Graph& g, Query q) {
    check_query(g, q);
    return 1 + bfs_distances(g, q.source)[static_cast<std::size_t>(q.target)];
}

namespace {

// A node lies on some shortest path iff dist_s + dist_t equals the query distance,
// so the walk only follows edges that keep both conditions.
void expand(const Graph& g, const std::vector<int>& to_target, NodeId x, NodeId target, std::vector<NodeId>& prefix,
            ShortestPaths& out, std::size_t cap) {
    if (out.truncated) return;
    if (x == target) {
        if (out.paths.size() == cap) {
            out.truncated = true;
            return;
        }
        out.paths.push_back(Path{prefix});
        return;
    }
    const int remaining = to_target[static_cast<std::size_t>(x)];
    for (NodeId y : g.neighbors(x)) {
        if (to_target[static_cast<std::size_t>(y)] != remaining - 1) continue;
        prefix.push_back(y);
        expand(g, to_target, y, target, prefix, out, cap);
        prefix.pop_back();
        if (out.truncated) return;
    }
}

}  // namespace

ShortestPaths all_shortest_paths(const Graph& g, Query q, std::size_t cap) {
    check_query(g, q);
    const auto to_target = bfs_distances(g, q.target);
    ShortestPaths out;
    std::vector<NodeId> prefix{q.source};
    expand(g, to_target, q.source, q.target, prefix, out, cap);
    return out;
}

bool is_valid_path(const Graph& g, const Path& p) {
    if (p.nodes.size() < 2) return false;
    std::vector<char> seen(static_cast<std::size_t>(g.n_nodes()), 0);
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
        const NodeId x = p.nodes[i];
        if (!g.contains(x) || seen[static_cast<std::size_t>(x)]) return false;
        seen[static_cast<std::size_t>(x)] = 1;
        if (i > 0 && !g.has_edge(p.nodes[i - 1], x)) return false;
    }
    return true;
}

Graph read_graph_text(std::istream& in) {
    long n = 0;
    long m = 0;
    if (!(in >> n >> m) || m < 0) throw Error(ErrorCode::ParseError, "expected header 'n m'");
    if (n < 2 || n > kMaxNodes) throw Error(ErrorCode::TooManyNodes, "node count " + std::to_string(n));
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long i = 0; i < m; ++i) {
        long u = 0;
        long v = 0;
        if (!(in >> u >> v)) throw Error(ErrorCode::ParseError, "expected " + std::to_string(m) + " edge lines");
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    return validate_graph(static_cast<int>(n), edges);
}

Graph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
    return read_graph_text(in);
}

void write_graph_text(std::ostream& out, const Graph& g) {
    out << g.n_nodes() << ' ' << g.n_edges() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

}  // namespace snav
