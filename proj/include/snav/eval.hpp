#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snav/graph_gen.hpp"
#include "snav/sln.hpp"

namespace snav {

/// ℓ̄ − ℓ*: mean length of the candidates strictly longer than the shortest,
/// minus the shortest length. nullopt when no candidate is longer.
std::optional<double> path_length_gap(std::span<const int> candidate_lengths, int shortest_length);

struct QueryPolicy {
    /// nullopt: every ordered (source, target) pair of every graph.
    std::optional<std::size_t> sample;

    static QueryPolicy all() { return {}; }
    static QueryPolicy sampled(std::size_t n) { return {n}; }
    /// "all" or "sample:N". Throws InvalidArgument.
    static QueryPolicy parse(std::string_view text);
    std::string describe() const;
};

struct QueryOutcome {
    std::size_t query_id = 0;  // position in the flattened (graph, source, target) order
    std::size_t graph_index = 0;
    Query query;
    SlnResult result;
};

struct LengthTally {
    std::size_t correct = 0;
    std::size_t total = 0;
    double accuracy() const { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
};

struct GapRecord {
    std::size_t query_id = 0;
    double gap = 0.0;
};

struct EvalConfigEcho {
    std::uint64_t seed = 0;
    std::vector<int> node_counts;
    std::size_t n_graphs = 0;
    std::string query_policy;
    std::string k_mode;
    bool exclude_visited = true;
};

struct EvalReport {
    std::size_t n_queries = 0;
    std::size_t n_optimal = 0;
    std::size_t n_longer = 0;
    std::size_t n_failed = 0;
    double overall_accuracy = 0.0;
    std::map<int, LengthTally> accuracy_by_length;
    std::map<std::size_t, std::size_t> k_histogram;  // k_used -> count, Optimal queries only
    std::vector<GapRecord> gap_stats;                // walks that reached the target but were longer
    EvalConfigEcho config;
    std::vector<QueryOutcome> outcomes;

    double fraction_k1() const;
};

/// Runs SLN on every query in the policy and checks each against BFS.
/// Sampling draws without replacement from the flattened query list.
/// Work is split across threads by graph; results are reduced in query order.
EvalReport evaluate_sln(std::span<const CanonicalGraph> graphs, const QueryPolicy& policy, const SlnConfig& cfg,
                        std::uint64_t seed, unsigned threads = 0);

enum class TableFormat { Csv, JsonLines };

inline constexpr std::string_view kPlotSchemaVersion = "1";

/// Writes accuracy_by_length, k_histogram and gap_distribution tables into dir.
/// Returns the written paths.
std::vector<std::filesystem::path> emit_plot_data(const EvalReport& report, const std::filesystem::path& dir,
                                                  TableFormat format = TableFormat::Csv);

/// Summary JSON (no per-query outcomes).
std::string report_json(const EvalReport& report);

}  // namespace snav
