#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snav/graph.hpp"
#include "snav/sample.hpp"

namespace snav {

inline constexpr std::string_view kGeneratorVersion = "snav-graph-gen/1";

/// Isomorphism-class identifier: one byte holding n, then the minimal upper-triangle
/// adjacency bit string packed MSB first.
struct CanonicalKey {
    std::vector<std::uint8_t> bytes;

    std::string hex() const;
    static CanonicalKey from_hex(std::string_view hex);

    auto operator<=>(const CanonicalKey&) const = default;
};

struct CanonicalGraph {
    Graph graph;  // relabeled into canonical order
    CanonicalKey key;
};

struct CanonicalLabeling {
    std::vector<NodeId> order;  // order[position] = original node
    CanonicalKey key;
};

/// Minimum adjacency bit string over node orderings that respect an
/// equitable-refinement partition of the nodes. Bits run column-major over the
/// upper triangle, (0,1) (0,2) (1,2) (0,3) ..., so a partial ordering fixes a
/// key prefix and the search prunes any branch that already exceeds the best.
CanonicalLabeling canonical_labeling(const Graph& g);
CanonicalKey canonical_key(const Graph& g);
CanonicalGraph canonicalize(const Graph& g);

/// One representative per isomorphism class of connected graphs on n nodes,
/// sorted by key. Throws UnsupportedSize outside 1 < n <= 7.
std::vector<CanonicalGraph> enumerate_connected(int n);

/// Rejection-samples a connected graph: m uniform in [n-1, n(n-1)/2] (or the
/// forced count), then m distinct node pairs. Deterministic in seed.
Graph sample_random_connected(int n, std::uint64_t seed, std::optional<int> edge_count = std::nullopt);

struct TrainTestSplit {
    std::vector<CanonicalGraph> train;
    std::vector<CanonicalGraph> test;
};

/// Dedups by key, sorts, shuffles with seed, then puts round(ratio * N) graphs in train.
TrainTestSplit split_train_test(std::span<const CanonicalGraph> graphs, double ratio, std::uint64_t seed);

/// Label and order randomization of a sample.
///
/// Applying a remap to a sample:
///   edges_out[i]  = relabel(edges_in[edge_order[i]]), endpoints swapped if flips[i]
///   nodes_out[i]  = node_permutation[nodes_in[node_list_order[i]]]
///   query, path   = relabeled by node_permutation
struct Remap {
    std::vector<NodeId> node_permutation;
    std::vector<std::size_t> edge_order;
    std::vector<bool> flips;
    std::vector<std::size_t> node_list_order;
    std::uint64_t seed = 0;

    static Remap identity(int n_nodes, std::size_t n_edges, std::size_t n_listed_nodes);
    static Remap identity(int n_nodes, std::size_t n_edges) {
        return identity(n_nodes, n_edges, static_cast<std::size_t>(n_nodes));
    }

    /// Draw order: node permutation, edge order, one coin per edge position,
    /// node list order. Each permutation is a Fisher-Yates shuffle of the identity.
    static Remap random(int n_nodes, std::size_t n_edges, std::uint64_t seed);

    Remap inverse() const;
};

/// Throws SizeMismatch if the remap does not fit the sample.
SampleParts apply_remap(const SampleParts& sample, const Remap& r);

/// Records: "<key_hex> n m u1 v1 u2 v2 ...", one graph per line.
void write_graph_set(std::ostream& out, std::span<const CanonicalGraph> graphs);
std::vector<CanonicalGraph> read_graph_set(std::istream& in);

struct GraphSetManifest {
    std::vector<int> node_counts;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::string generator_version{kGeneratorVersion};
};

void write_graph_set_manifest(std::ostream& out, const GraphSetManifest& m);

}  // namespace snav
