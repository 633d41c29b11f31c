#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "snav/graph.hpp"
#include "snav/spectral.hpp"

namespace snav {

enum class TieBreak {
    /// Smallest far-endpoint node id, then smallest target-edge column.
    SmallestNeighborThenColumn,
};

struct SlnConfig {
    std::optional<std::size_t> k;     // nullopt means adaptive
    std::optional<int> max_steps;     // node budget; nullopt means n_nodes
    TieBreak tie_break = TieBreak::SmallestNeighborThenColumn;
    bool exclude_visited = true;
    /// Distances within this of the minimum count as tied.
    double tie_epsilon = 1e-9;
};

enum class SlnStatus { Optimal, ValidButLonger, NoPathWithinBudget };

std::string_view to_string(SlnStatus s) noexcept;

struct SlnResult {
    /// The walk taken from the source; ends at the target unless the status is NoPathWithinBudget.
    Path path;
    std::size_t k_used = 0;
    SlnStatus status = SlnStatus::NoPathWithinBudget;
    int shortest_length = 0;

    bool reached() const { return status != SlnStatus::NoPathWithinBudget; }
    bool operator==(const SlnResult&) const = default;
};

struct IncidentEdge {
    Edge edge;
    NodeId far = 0;  // endpoint other than the gathering node
    std::vector<double> coords;
};

/// Edges touching `node`, ordered by ascending neighbor id.
std::vector<IncidentEdge> gather_incident(const SpectralEmbedding& emb, const Graph& g, NodeId node);

struct EdgeDistanceMatrix {
    std::vector<IncidentEdge> rows;  // current-node edges (after the visited filter)
    std::vector<IncidentEdge> cols;  // target-node edges
    std::vector<double> entries;     // row-major

    double at(std::size_t r, std::size_t c) const { return entries[r * cols.size() + c]; }
};

/// `visited` is indexed by node id.
EdgeDistanceMatrix edge_distance_matrix(const SpectralEmbedding& emb, const Graph& g, NodeId current, NodeId target,
                                        std::span<const char> visited, const SlnConfig& cfg);

/// Far endpoint of the current-node edge with the globally smallest distance to
/// any target-node edge. Throws DeadEnd when every candidate edge is filtered out.
NodeId sln_step(const SpectralEmbedding& emb, const Graph& g, NodeId current, NodeId target,
                std::span<const char> visited, const SlnConfig& cfg);

/// Optional per-step trace for debugging.
struct SlnTrace {
    std::vector<EdgeDistanceMatrix> steps;
};

/// Greedy walk with a fixed k.
SlnResult sln_find_path(const Graph& g, Query q, std::size_t k, const SlnConfig& cfg = {}, SlnTrace* trace = nullptr);
SlnResult sln_find_path(const Graph& g, const SpectralBasis& basis, Query q, std::size_t k, const SlnConfig& cfg = {},
                        SlnTrace* trace = nullptr);

/// Tries k = 1, 2, ... until the walk is optimal. Without an optimal k it
/// returns the shortest walk that reached the target (smallest k on ties), or the
/// k = 1 failure when none did.
SlnResult sln_adaptive(const Graph& g, Query q, const SlnConfig& cfg = {});
SlnResult sln_adaptive(const Graph& g, const SpectralBasis& basis, Query q, const SlnConfig& cfg = {});

/// Dispatches on cfg.k.
SlnResult sln_solve(const Graph& g, const SpectralBasis& basis, Query q, const SlnConfig& cfg);

}  // namespace snav
