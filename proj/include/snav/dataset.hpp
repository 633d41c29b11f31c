#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snav/graph_gen.hpp"
#include "snav/sample.hpp"

namespace snav {

/// The fixed 16-token vocabulary. Node tokens carry their label as id.
namespace vocab {
inline constexpr int kNodeTokens = 10;
inline constexpr int kBos = 10;
inline constexpr int kEos = 11;
inline constexpr int kEdge = 12;   // <e>: closes an edge "u v"
inline constexpr int kNodes = 13;  // <n>: ends the edge list, starts the node list
inline constexpr int kQuery = 14;  // <q>: the next two nodes are source and target
inline constexpr int kPath = 15;   // <p>: the path follows, source first
inline constexpr int kSize = 16;

std::string_view token_string(int id);
/// Throws MalformedSequence on unknown strings.
int token_id(std::string_view text);
inline bool is_node(int id) { return id >= 0 && id < kNodeTokens; }
}  // namespace vocab

/// Which positions carry loss.
enum class MaskPolicy {
    /// Every token after <p> through <eos>: the whole path plus <eos> (l + 1 positions).
    PathAndEos,
    /// Skips the source echo right after <p> (l positions).
    PredictedOnly,
};

/// <bos> (u v <e>)* <n> nodes* <q> src tgt <p> path* <eos>
std::vector<int> encode(const SampleParts& parts);
/// Throws MalformedSequence.
SampleParts decode(std::span<const int> ids);
std::vector<char> loss_mask(std::span<const int> ids, MaskPolicy policy = MaskPolicy::PathAndEos);

std::string to_text(std::span<const int> ids);
std::vector<int> from_text(std::string_view line);

struct TokenSample {
    SampleParts parts;
    std::vector<int> token_ids;
    std::vector<char> mask;
};

/// Encodes after checking the path is a shortest path of the sample graph.
TokenSample make_token_sample(const SampleParts& parts, MaskPolicy policy = MaskPolicy::PathAndEos);

struct Bucket {
    int length = 0;   // shortest path node count
    int n_nodes = 0;
    std::size_t available = 0;
    std::size_t emitted = 0;
};

struct Dataset {
    std::vector<SampleParts> samples;  // in emission order
    std::vector<Bucket> buckets;       // ascending (length, n_nodes)
};

/// Builds one sample per unordered node pair of every graph (direction by a
/// coin, one shortest path uniformly at random), buckets them by
/// (shortest length, node count) and draws round-robin across buckets until
/// `samples_target` or exhaustion. Throws EmptySplit on no graphs.
Dataset assemble_dataset(std::span<const CanonicalGraph> graphs, std::size_t samples_target, std::uint64_t seed);

/// Graphs 3..min(7, max_nodes) exhaustively, plus `random_per_size` sampled graphs
/// for each larger size up to max_nodes.
std::vector<CanonicalGraph> graph_pool(int max_nodes, std::size_t random_per_size, std::uint64_t seed,
                                       int min_nodes = 3);

struct GenOptions {
    int max_nodes = 7;
    int min_nodes = 3;
    std::size_t train_samples = 50'000;
    std::size_t test_samples = 25'000;
    std::size_t random_per_size = 200;
    double train_ratio = 0.8;
    std::uint64_t seed = 0;
};

struct GenSummary {
    std::size_t train_graphs = 0;
    std::size_t test_graphs = 0;
    Dataset train;
    Dataset test;
    std::string split_hash;
};

inline constexpr std::string_view kDatasetVersion = "snav-dataset/1";

/// Writes train.txt, test.txt, graphs_train.txt, graphs_test.txt and manifest.json into dir.
GenSummary generate_corpus(const GenOptions& opts, const std::filesystem::path& dir);

void write_dataset(const std::filesystem::path& file, const Dataset& ds);
std::vector<SampleParts> read_dataset(const std::filesystem::path& file);

std::string split_hash(std::span<const CanonicalGraph> train, std::span<const CanonicalGraph> test);

}  // namespace snav
