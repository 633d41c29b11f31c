#include "snav/sln.hpp"

#include <algorithm>
#include <limits>

namespace snav {

std::string_view to_string(SlnStatus s) noexcept {
    switch (s) {
        case SlnStatus::Optimal: return "optimal";
        case SlnStatus::ValidButLonger: return "valid_but_longer";
        case SlnStatus::NoPathWithinBudget: return "no_path_within_budget";
    }
    return "unknown";
}

std::vector<IncidentEdge> gather_incident(const SpectralEmbedding& emb, const Graph& g, NodeId node) {
    std::vector<IncidentEdge> out;
    out.reserve(g.neighbors(node).size());
    for (NodeId y : g.neighbors(node)) {
        const Edge e = Edge::make(node, y);
        const auto c = emb.coords(e);
        out.push_back(IncidentEdge{e, y, std::vector<double>(c.begin(), c.end())});
    }
    return out;
}

EdgeDistanceMatrix edge_distance_matrix(const SpectralEmbedding& emb, const Graph& g, NodeId current, NodeId target,
                                        std::span<const char> visited, const SlnConfig& cfg) {
    EdgeDistanceMatrix d;
    for (auto& inc : gather_incident(emb, g, current)) {
        if (cfg.exclude_visited && visited[static_cast<std::size_t>(inc.far)]) continue;
        d.rows.push_back(std::move(inc));
    }
    d.cols = gather_incident(emb, g, target);
    d.entries.reserve(d.rows.size() * d.cols.size());
    for (const auto& r : d.rows) {
        for (const auto& c : d.cols) d.entries.push_back(l2_distance(r.coords, c.coords));
    }
    return d;
}

NodeId sln_step(const SpectralEmbedding& emb, const Graph& g, NodeId current, NodeId target,
                std::span<const char> visited, const SlnConfig& cfg) {
    const auto d = edge_distance_matrix(emb, g, current, target, visited, cfg);
    if (d.rows.empty()) throw Error(ErrorCode::DeadEnd, "every edge at node " + std::to_string(current) + " is visited");

    const double best = *std::min_element(d.entries.begin(), d.entries.end());
    // Rows ascend by far endpoint and columns by index, so the first entry
    // within epsilon of the minimum is the tie-break winner.
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
        for (std::size_t c = 0; c < d.cols.size(); ++c) {
            if (d.at(r, c) <= best + cfg.tie_epsilon) return d.rows[r].far;
        }
    }
    return d.rows.front().far;
}

SlnResult sln_find_path(const Graph& g, Query q, std::size_t k, const SlnConfig& cfg, SlnTrace* trace) {
    return sln_find_path(g, spectral_basis(g), q, k, cfg, trace);
}

SlnResult sln_find_path(const Graph& g, const SpectralBasis& basis, Query q, std::size_t k, const SlnConfig& cfg,
                        SlnTrace* trace) {
    check_query(g, q);
    const int budget = cfg.max_steps.value_or(g.n_nodes());
    if (budget < 2) throw Error(ErrorCode::InvalidArgument, "max_steps must be at least 2");
    const SpectralEmbedding emb = embedding_from_basis(basis, k);

    SlnResult result;
    result.k_used = k;
    result.shortest_length = bfs_shortest_length(g, q);
    std::vector<char> visited(static_cast<std::size_t>(g.n_nodes()), 0);
    NodeId current = q.source;
    visited[static_cast<std::size_t>(current)] = 1;
    result.path.nodes.push_back(current);

    while (current != q.target) {
        if (static_cast<int>(result.path.length()) >= budget) return result;
        if (trace) trace->steps.push_back(edge_distance_matrix(emb, g, current, q.target, visited, cfg));
        NodeId next = 0;
        try {
            next = sln_step(emb, g, current, q.target, visited, cfg);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DeadEnd) throw;
            return result;
        }
        // Without the visited filter a step depends only on (current, target),
        // so returning to a node means the walk cycles forever.
        if (visited[static_cast<std::size_t>(next)]) return result;
        visited[static_cast<std::size_t>(next)] = 1;
        result.path.nodes.push_back(next);
        current = next;
    }
    result.status = static_cast<int>(result.path.length()) == result.shortest_length ? SlnStatus::Optimal
                                                                                     : SlnStatus::ValidButLonger;
    return result;
}

SlnResult sln_adaptive(const Graph& g, Query q, const SlnConfig& cfg) { return sln_adaptive(g, spectral_basis(g), q, cfg); }

SlnResult sln_adaptive(const Graph& g, const SpectralBasis& basis, Query q, const SlnConfig& cfg) {
    std::optional<SlnResult> best_valid;
    std::optional<SlnResult> first;
    for (std::size_t k = 1; k <= basis.n_nonzero(); ++k) {
        SlnResult r = sln_find_path(g, basis, q, k, cfg);
        if (r.status == SlnStatus::Optimal) return r;
        if (r.reached() && (!best_valid || r.path.length() < best_valid->path.length())) best_valid = r;
        if (!first) first = std::move(r);
    }
    if (best_valid) return *best_valid;
    return *first;
}

SlnResult sln_solve(const Graph& g, const SpectralBasis& basis, Query q, const SlnConfig& cfg) {
    if (cfg.k) return sln_find_path(g, basis, q, *cfg.k, cfg);
    return sln_adaptive(g, basis, q, cfg);
}

}  // namespace snav
