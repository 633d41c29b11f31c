#include "snav/eval.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <thread>

#include "json.hpp"
#include "snav/rng.hpp"

namespace snav {

std::optional<double> path_length_gap(std::span<const int> candidate_lengths, int shortest_length) {
    double sum = 0.0;
    std::size_t count = 0;
    for (int len : candidate_lengths) {
        if (len > shortest_length) {
            sum += len;
            ++count;
        }
    }
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count) - shortest_length;
}

QueryPolicy QueryPolicy::parse(std::string_view text) {
    if (text == "all") return all();
    constexpr std::string_view prefix = "sample:";
    if (text.substr(0, prefix.size()) == prefix) {
        const std::string digits(text.substr(prefix.size()));
        if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos) {
            return sampled(std::stoull(digits));
        }
    }
    throw Error(ErrorCode::InvalidArgument, "query policy must be 'all' or 'sample:N', got '" + std::string(text) + "'");
}

std::string QueryPolicy::describe() const { return sample ? "sample:" + std::to_string(*sample) : "all"; }

double EvalReport::fraction_k1() const {
    if (n_optimal == 0) return 0.0;
    const auto it = k_histogram.find(1);
    return it == k_histogram.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n_optimal);
}

EvalReport evaluate_sln(std::span<const CanonicalGraph> graphs, const QueryPolicy& policy, const SlnConfig& cfg,
                        std::uint64_t seed, unsigned threads) {
    struct Slot {
        std::size_t query_id;
        std::size_t graph_index;
        Query query;
    };
    std::vector<Slot> all;
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        const int n = graphs[gi].graph.n_nodes();
        for (NodeId s = 0; s < n; ++s) {
            for (NodeId t = 0; t < n; ++t) {
                if (s != t) all.push_back(Slot{all.size(), gi, Query{s, t}});
            }
        }
    }

    std::vector<Slot> chosen;
    if (policy.sample && *policy.sample < all.size()) {
        std::vector<std::size_t> idx(all.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        Rng rng(seed);
        for (std::size_t i = 0; i < *policy.sample; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(*policy.sample);
        std::sort(idx.begin(), idx.end());
        for (std::size_t i : idx) chosen.push_back(all[i]);
    } else {
        chosen = std::move(all);
    }

    // Queries of one graph are contiguous; hand out graph ranges to workers.
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    for (std::size_t i = 0; i < chosen.size();) {
        std::size_t j = i;
        while (j < chosen.size() && chosen[j].graph_index == chosen[i].graph_index) ++j;
        ranges.emplace_back(i, j);
        i = j;
    }
    std::vector<SlnResult> results(chosen.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t r = next++; r < ranges.size(); r = next++) {
            const auto [lo, hi] = ranges[r];
            const Graph& g = graphs[chosen[lo].graph_index].graph;
            const SpectralBasis basis = spectral_basis(g);
            // A fixed k larger than this graph's spectrum uses every eigenvector it has.
            SlnConfig local = cfg;
            if (local.k) local.k = std::min(*local.k, basis.n_nonzero());
            for (std::size_t i = lo; i < hi; ++i) results[i] = sln_solve(g, basis, chosen[i].query, local);
        }
    };
    const unsigned n_threads = std::max(1U, threads ? threads : std::thread::hardware_concurrency());
    if (n_threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
    }

    EvalReport report;
    report.n_queries = chosen.size();
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        const SlnResult& r = results[i];
        LengthTally& tally = report.accuracy_by_length[r.shortest_length];
        ++tally.total;
        switch (r.status) {
            case SlnStatus::Optimal:
                ++report.n_optimal;
                ++tally.correct;
                ++report.k_histogram[r.k_used];
                break;
            case SlnStatus::ValidButLonger: {
                ++report.n_longer;
                const int len = static_cast<int>(r.path.length());
                if (auto gap = path_length_gap(std::span<const int>(&len, 1), r.shortest_length)) {
                    report.gap_stats.push_back(GapRecord{chosen[i].query_id, *gap});
                }
                break;
            }
            case SlnStatus::NoPathWithinBudget: ++report.n_failed; break;
        }
        report.outcomes.push_back(QueryOutcome{chosen[i].query_id, chosen[i].graph_index, chosen[i].query, r});
    }
    report.overall_accuracy =
        report.n_queries ? static_cast<double>(report.n_optimal) / static_cast<double>(report.n_queries) : 0.0;

    report.config.seed = seed;
    report.config.n_graphs = graphs.size();
    for (const auto& cg : graphs) report.config.node_counts.push_back(cg.graph.n_nodes());
    std::sort(report.config.node_counts.begin(), report.config.node_counts.end());
    report.config.node_counts.erase(std::unique(report.config.node_counts.begin(), report.config.node_counts.end()),
                                    report.config.node_counts.end());
    report.config.query_policy = policy.describe();
    report.config.k_mode = cfg.k ? "k:" + std::to_string(*cfg.k) : "adaptive";
    report.config.exclude_visited = cfg.exclude_visited;
    return report;
}

namespace {

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

class TableWriter {
public:
    TableWriter(const std::filesystem::path& file, TableFormat format, std::string_view schema,
                std::vector<std::string> columns)
        : out_(file, std::ios::binary), format_(format), columns_(std::move(columns)) {
        if (!out_) throw Error(ErrorCode::IoFailure, "cannot write " + file.string());
        if (format_ == TableFormat::Csv) {
            out_ << "# schema=" << schema << " version=" << kPlotSchemaVersion << '\n';
            for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
            out_ << '\n';
        } else {
            nlohmann::ordered_json header;
            header["schema"] = std::string(schema);
            header["version"] = std::string(kPlotSchemaVersion);
            header["columns"] = columns_;
            out_ << header.dump() << '\n';
        }
    }

    void row(const std::vector<std::string>& cells) {
        if (format_ == TableFormat::Csv) {
            for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        } else {
            // Cells are numeric literals, so they embed as raw JSON numbers.
            out_ << '{';
            for (std::size_t i = 0; i < cells.size(); ++i) {
                out_ << (i ? "," : "") << '"' << columns_[i] << "\":" << cells[i];
            }
            out_ << '}';
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
    TableFormat format_;
    std::vector<std::string> columns_;
};

}  // namespace

std::vector<std::filesystem::path> emit_plot_data(const EvalReport& report, const std::filesystem::path& dir,
                                                  TableFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
    const std::string ext = format == TableFormat::Csv ? ".csv" : ".jsonl";
    std::vector<std::filesystem::path> written;

    {
        written.push_back(dir / ("accuracy_by_length" + ext));
        TableWriter t(written.back(), format, "accuracy_by_length", {"length", "correct", "total", "accuracy"});
        for (const auto& [len, tally] : report.accuracy_by_length) {
            t.row({std::to_string(len), std::to_string(tally.correct), std::to_string(tally.total),
                   fmt_double(tally.accuracy())});
        }
    }
    {
        written.push_back(dir / ("k_histogram" + ext));
        TableWriter t(written.back(), format, "k_histogram", {"k", "count", "log_count"});
        for (const auto& [k, count] : report.k_histogram) {
            t.row({std::to_string(k), std::to_string(count), fmt_double(std::log(static_cast<double>(count)))});
        }
    }
    {
        written.push_back(dir / ("gap_distribution" + ext));
        TableWriter t(written.back(), format, "gap_distribution", {"query_id", "gap"});
        for (const auto& g : report.gap_stats) t.row({std::to_string(g.query_id), fmt_double(g.gap)});
    }
    return written;
}

std::string report_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["n_queries"] = report.n_queries;
    j["n_optimal"] = report.n_optimal;
    j["n_valid_but_longer"] = report.n_longer;
    j["n_failed"] = report.n_failed;
    j["overall_accuracy"] = report.overall_accuracy;
    j["fraction_k1"] = report.fraction_k1();
    auto by_len = nlohmann::ordered_json::array();
    for (const auto& [len, t] : report.accuracy_by_length) {
        by_len.push_back({{"length", len}, {"correct", t.correct}, {"total", t.total}, {"accuracy", t.accuracy()}});
    }
    j["accuracy_by_length"] = std::move(by_len);
    auto hist = nlohmann::ordered_json::array();
    for (const auto& [k, c] : report.k_histogram) hist.push_back({{"k", k}, {"count", c}});
    j["k_histogram"] = std::move(hist);
    auto gaps = nlohmann::ordered_json::array();
    for (const auto& g : report.gap_stats) gaps.push_back({{"query_id", g.query_id}, {"gap", g.gap}});
    j["gap_stats"] = std::move(gaps);
    j["config"] = {{"seed", report.config.seed},
                   {"node_counts", report.config.node_counts},
                   {"n_graphs", report.config.n_graphs},
                   {"query_policy", report.config.query_policy},
                   {"k_mode", report.config.k_mode},
                   {"exclude_visited", report.config.exclude_visited}};
    return j.dump(2) + "\n";
}

}  // namespace snav
