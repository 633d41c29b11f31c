#include "snav/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "snav/rng.hpp"

namespace snav {

namespace vocab {

namespace {
constexpr std::array<std::string_view, kSize> kStrings = {
    "0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "<bos>", "<eos>", "<e>", "<n>", "<q>", "<p>",
};
}  // namespace

std::string_view token_string(int id) {
    if (id < 0 || id >= kSize) throw Error(ErrorCode::MalformedSequence, "token id " + std::to_string(id));
    return kStrings[static_cast<std::size_t>(id)];
}

int token_id(std::string_view text) {
    for (int i = 0; i < kSize; ++i) {
        if (kStrings[static_cast<std::size_t>(i)] == text) return i;
    }
    throw Error(ErrorCode::MalformedSequence, "unknown token '" + std::string(text) + "'");
}

}  // namespace vocab

namespace {

int node_token(NodeId x) {
    if (!vocab::is_node(x)) throw Error(ErrorCode::NodeLabelOutOfVocab, "node label " + std::to_string(x));
    return x;
}

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::MalformedSequence, why); }

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::vector<int> encode(const SampleParts& parts) {
    if (parts.path.length() < 2) throw Error(ErrorCode::InvalidArgument, "path needs at least two nodes");
    std::vector<int> ids;
    ids.reserve(3 * parts.edges.size() + parts.nodes.size() + parts.path.length() + 7);
    ids.push_back(vocab::kBos);
    for (const auto& [u, v] : parts.edges) {
        ids.push_back(node_token(u));
        ids.push_back(node_token(v));
        ids.push_back(vocab::kEdge);
    }
    ids.push_back(vocab::kNodes);
    for (NodeId x : parts.nodes) ids.push_back(node_token(x));
    ids.push_back(vocab::kQuery);
    ids.push_back(node_token(parts.query.source));
    ids.push_back(node_token(parts.query.target));
    ids.push_back(vocab::kPath);
    for (NodeId x : parts.path.nodes) ids.push_back(node_token(x));
    ids.push_back(vocab::kEos);
    return ids;
}

SampleParts decode(std::span<const int> ids) {
    std::size_t i = 0;
    auto at_end = [&] { return i >= ids.size(); };
    if (ids.empty() || ids[0] != vocab::kBos) malformed("sequence must start with <bos>");
    ++i;

    SampleParts parts;
    for (;;) {
        if (at_end()) malformed("missing <n>");
        if (ids[i] == vocab::kNodes) break;
        if (i + 2 >= ids.size() || !vocab::is_node(ids[i]) || !vocab::is_node(ids[i + 1]) || ids[i + 2] != vocab::kEdge) {
            malformed("expected 'u v <e>' at position " + std::to_string(i));
        }
        parts.edges.emplace_back(ids[i], ids[i + 1]);
        i += 3;
    }
    ++i;
    for (;;) {
        if (at_end()) malformed("missing <q>");
        if (ids[i] == vocab::kQuery) break;
        if (!vocab::is_node(ids[i])) malformed("non-node token in node list at position " + std::to_string(i));
        parts.nodes.push_back(ids[i]);
        ++i;
    }
    ++i;
    if (i + 2 >= ids.size() || !vocab::is_node(ids[i]) || !vocab::is_node(ids[i + 1]) || ids[i + 2] != vocab::kPath) {
        malformed("expected '<q> src tgt <p>'");
    }
    parts.query = Query{ids[i], ids[i + 1]};
    i += 3;
    for (;;) {
        if (at_end()) malformed("missing <eos>");
        if (ids[i] == vocab::kEos) break;
        if (!vocab::is_node(ids[i])) malformed("non-node token in path at position " + std::to_string(i));
        parts.path.nodes.push_back(ids[i]);
        ++i;
    }
    if (i + 1 != ids.size()) malformed("tokens after <eos>");
    if (parts.path.length() < 2) malformed("path shorter than two nodes");
    parts.n_nodes = static_cast<int>(parts.nodes.size());
    return parts;
}

std::vector<char> loss_mask(std::span<const int> ids, MaskPolicy policy) {
    static_cast<void>(decode(ids));
    const auto p = static_cast<std::size_t>(std::find(ids.begin(), ids.end(), vocab::kPath) - ids.begin());
    const std::size_t first = p + (policy == MaskPolicy::PathAndEos ? 1 : 2);
    std::vector<char> mask(ids.size(), 0);
    for (std::size_t i = first; i < ids.size(); ++i) mask[i] = 1;
    return mask;
}

std::string to_text(std::span<const int> ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out.push_back(' ');
        out.append(vocab::token_string(ids[i]));
    }
    return out;
}

std::vector<int> from_text(std::string_view line) {
    std::vector<int> ids;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && line[pos] == ' ') ++pos;
        if (pos == line.size()) break;
        const std::size_t end = std::min(line.find(' ', pos), line.size());
        ids.push_back(vocab::token_id(line.substr(pos, end - pos)));
        pos = end;
    }
    return ids;
}

TokenSample make_token_sample(const SampleParts& parts, MaskPolicy policy) {
    const Graph g = parts.graph();
    if (!is_valid_path(g, parts.path) || parts.path.nodes.front() != parts.query.source ||
        parts.path.nodes.back() != parts.query.target ||
        static_cast<int>(parts.path.length()) != bfs_shortest_length(g, parts.query)) {
        throw Error(ErrorCode::InvalidArgument, "sample path is not a shortest path for its query");
    }
    TokenSample s{parts, encode(parts), {}};
    s.mask = loss_mask(s.token_ids, policy);
    return s;
}

Dataset assemble_dataset(std::span<const CanonicalGraph> graphs, std::size_t samples_target, std::uint64_t seed) {
    if (graphs.empty()) throw Error(ErrorCode::EmptySplit, "no graphs in split");
    Rng rng(seed);
    std::map<std::pair<int, int>, std::vector<SampleParts>> pools;
    for (const auto& cg : graphs) {
        const Graph& g = cg.graph;
        SampleParts base;
        base.n_nodes = g.n_nodes();
        for (const Edge& e : g.edges()) base.edges.emplace_back(e.u, e.v);
        for (NodeId x = 0; x < g.n_nodes(); ++x) base.nodes.push_back(x);
        for (NodeId s = 0; s < g.n_nodes(); ++s) {
            for (NodeId t = s + 1; t < g.n_nodes(); ++t) {
                const Query q = rng.coin() ? Query{t, s} : Query{s, t};
                const auto sp = all_shortest_paths(g, q);
                SampleParts sample = base;
                sample.query = q;
                sample.path = sp.paths[static_cast<std::size_t>(rng.below(sp.paths.size()))];
                pools[{static_cast<int>(sample.path.length()), g.n_nodes()}].push_back(std::move(sample));
            }
        }
    }

    Dataset ds;
    std::vector<std::vector<SampleParts>*> order;
    for (auto& [key, pool] : pools) {
        rng.shuffle(std::span<SampleParts>(pool));
        ds.buckets.push_back(Bucket{key.first, key.second, pool.size(), 0});
        order.push_back(&pool);
    }
    bool progressed = true;
    while (ds.samples.size() < samples_target && progressed) {
        progressed = false;
        for (std::size_t b = 0; b < order.size() && ds.samples.size() < samples_target; ++b) {
            Bucket& bucket = ds.buckets[b];
            if (bucket.emitted == bucket.available) continue;
            ds.samples.push_back((*order[b])[bucket.emitted]);
            ++bucket.emitted;
            progressed = true;
        }
    }
    return ds;
}

std::vector<CanonicalGraph> graph_pool(int max_nodes, std::size_t random_per_size, std::uint64_t seed, int min_nodes) {
    if (min_nodes < 3 || max_nodes < min_nodes || max_nodes > vocab::kNodeTokens) {
        throw Error(ErrorCode::InvalidArgument, "node range must lie within [3, 10]");
    }
    std::vector<CanonicalGraph> out;
    for (int n = min_nodes; n <= max_nodes; ++n) {
        if (n <= 7) {
            auto level = enumerate_connected(n);
            out.insert(out.end(), std::make_move_iterator(level.begin()), std::make_move_iterator(level.end()));
            continue;
        }
        for (std::size_t i = 0; i < random_per_size; ++i) {
            const std::uint64_t graph_seed = splitmix64(seed ^ (static_cast<std::uint64_t>(n) << 40) ^ i);
            out.push_back(canonicalize(sample_random_connected(n, graph_seed)));
        }
    }
    return out;
}

std::string split_hash(std::span<const CanonicalGraph> train, std::span<const CanonicalGraph> test) {
    // FNV-1a over sorted key hex of each side.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto side : {train, test}) {
        std::vector<std::string> keys;
        for (const auto& cg : side) keys.push_back(cg.key.hex());
        std::sort(keys.begin(), keys.end());
        for (const auto& k : keys) {
            mix(k);
            mix("\n");
        }
        mix("|");
    }
    std::ostringstream out;
    out << std::hex;
    out.fill('0');
    out.width(16);
    out << h;
    return out.str();
}

void write_dataset(const std::filesystem::path& file, const Dataset& ds) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + file.string());
    for (const auto& s : ds.samples) out << to_text(encode(s)) << '\n';
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + file.string());
}

std::vector<SampleParts> read_dataset(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + file.string());
    std::vector<SampleParts> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(decode(from_text(line)));
    }
    return out;
}

namespace {

nlohmann::ordered_json bucket_table(const Dataset& ds) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& b : ds.buckets) {
        nlohmann::ordered_json row;
        row["length"] = b.length;
        row["n_nodes"] = b.n_nodes;
        row["available"] = b.available;
        row["count"] = b.emitted;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_graphs(const std::filesystem::path& file, std::span<const CanonicalGraph> graphs) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + file.string());
    write_graph_set(out, graphs);
}

}  // namespace

GenSummary generate_corpus(const GenOptions& opts, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());

    const auto pool = graph_pool(opts.max_nodes, opts.random_per_size, opts.seed, opts.min_nodes);
    const auto split = split_train_test(pool, opts.train_ratio, opts.seed);
    if (split.train.empty() || split.test.empty()) throw Error(ErrorCode::EmptySplit, "a split side has no graphs");

    GenSummary summary;
    summary.train_graphs = split.train.size();
    summary.test_graphs = split.test.size();
    summary.train = assemble_dataset(split.train, opts.train_samples, splitmix64(opts.seed ^ 0x7472ULL));
    summary.test = assemble_dataset(split.test, opts.test_samples, splitmix64(opts.seed ^ 0x7465ULL));
    summary.split_hash = split_hash(split.train, split.test);

    write_dataset(dir / "train.txt", summary.train);
    write_dataset(dir / "test.txt", summary.test);
    write_graphs(dir / "graphs_train.txt", split.train);
    write_graphs(dir / "graphs_test.txt", split.test);

    nlohmann::ordered_json m;
    m["generator_version"] = std::string(kDatasetVersion);
    m["graph_generator_version"] = std::string(kGeneratorVersion);
    m["seed"] = opts.seed;
    m["min_nodes"] = opts.min_nodes;
    m["max_nodes"] = opts.max_nodes;
    m["random_graphs_per_size"] = opts.random_per_size;
    m["train_ratio"] = opts.train_ratio;
    m["split_hash"] = summary.split_hash;
    m["train"] = {{"graphs", summary.train_graphs},
                  {"samples", summary.train.samples.size()},
                  {"buckets", bucket_table(summary.train)}};
    m["test"] = {{"graphs", summary.test_graphs},
                 {"samples", summary.test.samples.size()},
                 {"buckets", bucket_table(summary.test)}};
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write manifest");
    out << m.dump(2) << '\n';
    return summary;
}

}  // namespace snav
