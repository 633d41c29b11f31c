#pragma once

#include <utility>
#include <vector>

#include "snav/graph.hpp"

namespace snav {

/// Presented endpoint order matters for serialization, so this is not an Edge.
using EdgeListing = std::pair<NodeId, NodeId>;

/// The structural content of one training/eval sample, before tokenization.
struct SampleParts {
    int n_nodes = 0;
    std::vector<EdgeListing> edges;
    std::vector<NodeId> nodes;
    Query query;
    Path path;

    bool operator==(const SampleParts&) const = default;

    /// Graph described by the edge listing (throws on invalid listings).
    Graph graph() const { return validate_graph(n_nodes, edges); }
};

}  // namespace snav
