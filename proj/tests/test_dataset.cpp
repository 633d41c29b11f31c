#include <gtest/gtest.h>

#include <unistd.h>

#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "oracles.hpp"
#include "snav/dataset.hpp"

using namespace snav;

namespace {

SampleParts chain_sample() {
    SampleParts s;
    s.n_nodes = 3;
    s.edges = {{0, 1}, {1, 2}};
    s.nodes = {0, 1, 2};
    s.query = {0, 2};
    s.path = Path{{0, 1, 2}};
    return s;
}

SampleParts random_sample(std::mt19937_64& gen) {
    std::uniform_int_distribution<int> size(3, 10);
    const int n = size(gen);
    const Graph g = validate_graph(n, oracle::random_connected(n, 0.3, gen));
    SampleParts s;
    s.n_nodes = n;
    for (const auto& e : g.edges()) s.edges.emplace_back(e.u, e.v);
    for (int x = 0; x < n; ++x) s.nodes.push_back(x);
    std::uniform_int_distribution<int> node(0, n - 1);
    s.query.source = node(gen);
    do {
        s.query.target = node(gen);
    } while (s.query.target == s.query.source);
    const auto sp = all_shortest_paths(g, s.query);
    std::uniform_int_distribution<std::size_t> pick(0, sp.paths.size() - 1);
    s.path = sp.paths[pick(gen)];
    return apply_remap(s, Remap::random(n, s.edges.size(), gen()));
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("snav_test_" + std::to_string(::getpid()) + "_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected snav::Error";
    return ErrorCode::IoFailure;
}

}  // namespace

TEST(Vocabulary, RoundTripsEveryToken) {
    for (int id = 0; id < vocab::kSize; ++id) EXPECT_EQ(vocab::token_id(vocab::token_string(id)), id);
    EXPECT_EQ(vocab::token_string(vocab::kBos), "<bos>");
    EXPECT_EQ(vocab::token_string(vocab::kPath), "<p>");
    EXPECT_EQ(vocab::token_string(7), "7");
    EXPECT_EQ(code_of([] { vocab::token_id("<x>"); }), ErrorCode::MalformedSequence);
    EXPECT_EQ(code_of([] { vocab::token_id("10"); }), ErrorCode::MalformedSequence);
}

TEST(Encode, ExactSequence) {
    const auto ids = encode(chain_sample());
    EXPECT_EQ(to_text(ids), "<bos> 0 1 <e> 1 2 <e> <n> 0 1 2 <q> 0 2 <p> 0 1 2 <eos>");
    EXPECT_EQ(from_text(to_text(ids)), ids);
}

TEST(Encode, Errors) {
    auto s = chain_sample();
    s.path = Path{{0}};
    EXPECT_EQ(code_of([&] { encode(s); }), ErrorCode::InvalidArgument);
    s = chain_sample();
    s.nodes.push_back(10);
    EXPECT_EQ(code_of([&] { encode(s); }), ErrorCode::NodeLabelOutOfVocab);
}

TEST(Decode, Errors) {
    const auto ok = encode(chain_sample());
    auto missing_nodes = ok;
    missing_nodes.erase(std::find(missing_nodes.begin(), missing_nodes.end(), vocab::kNodes));
    EXPECT_EQ(code_of([&] { decode(missing_nodes); }), ErrorCode::MalformedSequence);

    const auto p = static_cast<std::size_t>(std::find(ok.begin(), ok.end(), vocab::kPath) - ok.begin());
    const std::vector<int> truncated(ok.begin(), ok.begin() + static_cast<std::ptrdiff_t>(p + 1));
    EXPECT_EQ(code_of([&] { decode(truncated); }), ErrorCode::MalformedSequence);

    auto no_bos = ok;
    no_bos.erase(no_bos.begin());
    EXPECT_EQ(code_of([&] { decode(no_bos); }), ErrorCode::MalformedSequence);

    auto trailing = ok;
    trailing.push_back(3);
    EXPECT_EQ(code_of([&] { decode(trailing); }), ErrorCode::MalformedSequence);

    EXPECT_EQ(code_of([] { decode(from_text("<bos> 0 <e> <n> 0 1 <q> 0 1 <p> 0 1 <eos>")); }),
              ErrorCode::MalformedSequence);
    EXPECT_EQ(code_of([] { decode(from_text("<bos> 0 1 <e> <n> 0 1 <q> 0 1 <p> 0 <eos>")); }),
              ErrorCode::MalformedSequence);
    EXPECT_EQ(code_of([] { decode(std::vector<int>{}); }), ErrorCode::MalformedSequence);
}

TEST(Decode, InvertsEncodeOnRandomSamples) {
    std::mt19937_64 gen(41);
    for (int i = 0; i < 10'000; ++i) {
        const auto s = random_sample(gen);
        const auto ids = encode(s);
        for (int id : ids) ASSERT_TRUE(id >= 0 && id < vocab::kSize);
        ASSERT_EQ(decode(ids), s);
        ASSERT_EQ(decode(from_text(to_text(ids))), s);
    }
}

TEST(LossMask, PathAndEos) {
    const auto ids = encode(chain_sample());
    const auto mask = loss_mask(ids);
    ASSERT_EQ(mask.size(), ids.size());
    const std::size_t n = ids.size();
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(mask[i], i + 4 >= n ? 1 : 0) << i;

    const auto two = from_text("<bos> 0 1 <e> <n> 0 1 <q> 1 0 <p> 1 0 <eos>");
    const auto m2 = loss_mask(two);
    EXPECT_EQ(std::count(m2.begin(), m2.end(), 1), 3);
}

TEST(LossMask, CountsMatchPathLength) {
    std::mt19937_64 gen(43);
    for (int i = 0; i < 500; ++i) {
        const auto s = random_sample(gen);
        const auto ids = encode(s);
        const auto a = loss_mask(ids, MaskPolicy::PathAndEos);
        const auto b = loss_mask(ids, MaskPolicy::PredictedOnly);
        const auto len = static_cast<long>(s.path.length());
        ASSERT_EQ(std::count(a.begin(), a.end(), 1), len + 1);
        ASSERT_EQ(std::count(b.begin(), b.end(), 1), len);
        ASSERT_EQ(a.back(), 1);
    }
}

TEST(Remap, NodeRelabelCommutesWithEncoding) {
    std::mt19937_64 gen(47);
    for (int i = 0; i < 500; ++i) {
        const auto s = random_sample(gen);
        Remap r = Remap::identity(s.n_nodes, s.edges.size());
        r.node_permutation = oracle::random_permutation(s.n_nodes, gen);
        auto mapped = encode(s);
        for (int& id : mapped) {
            if (vocab::is_node(id)) id = r.node_permutation[static_cast<std::size_t>(id)];
        }
        ASSERT_EQ(encode(apply_remap(s, r)), mapped);
    }
}

TEST(MakeTokenSample, RejectsNonShortestPaths) {
    SampleParts s;
    s.n_nodes = 4;
    s.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    s.nodes = {0, 1, 2, 3};
    s.query = {0, 3};
    s.path = Path{{0, 1, 2, 3}};
    EXPECT_EQ(code_of([&] { make_token_sample(s); }), ErrorCode::InvalidArgument);
    s.path = Path{{0, 3}};
    const auto t = make_token_sample(s);
    EXPECT_EQ(t.token_ids, encode(s));
    EXPECT_EQ(std::count(t.mask.begin(), t.mask.end(), 1), 3);
}

TEST(AssembleDataset, RoundRobinBalance) {
    const auto graphs = enumerate_connected(5);
    for (std::size_t target : {10u, 37u, 100u, 150u, 10'000u}) {
        const auto ds = assemble_dataset(graphs, target, 3);
        std::size_t total = 0;
        std::size_t most = 0;
        for (const auto& b : ds.buckets) {
            total += b.available;
            most = std::max(most, b.emitted);
            ASSERT_LE(b.emitted, b.available);
        }
        ASSERT_EQ(ds.samples.size(), std::min(target, total));
        for (const auto& b : ds.buckets) ASSERT_GE(b.emitted, std::min(b.available, most - 1));
        // Available counts cover every unordered pair once.
        ASSERT_EQ(total, graphs.size() * 10);
    }
}

TEST(AssembleDataset, SamplesAreShortestPathsAndBucketed) {
    const auto graphs = enumerate_connected(6);
    const auto ds = assemble_dataset(graphs, 2000, 9);
    std::map<std::pair<int, int>, std::size_t> seen;
    for (const auto& s : ds.samples) {
        const Graph g = s.graph();
        ASSERT_TRUE(is_valid_path(g, s.path));
        ASSERT_EQ(static_cast<int>(s.path.length()), bfs_shortest_length(g, s.query));
        ASSERT_EQ(s.path.nodes.front(), s.query.source);
        ASSERT_EQ(s.path.nodes.back(), s.query.target);
        ++seen[{static_cast<int>(s.path.length()), s.n_nodes}];
    }
    for (const auto& b : ds.buckets) EXPECT_EQ(seen[std::pair(b.length, b.n_nodes)], b.emitted);
    for (std::size_t i = 1; i < ds.buckets.size(); ++i) {
        EXPECT_LT(std::pair(ds.buckets[i - 1].length, ds.buckets[i - 1].n_nodes),
                  std::pair(ds.buckets[i].length, ds.buckets[i].n_nodes));
    }
}

TEST(AssembleDataset, DeterministicAndSeedSensitive) {
    const auto graphs = enumerate_connected(5);
    EXPECT_EQ(assemble_dataset(graphs, 50, 1).samples, assemble_dataset(graphs, 50, 1).samples);
    EXPECT_NE(assemble_dataset(graphs, 50, 1).samples, assemble_dataset(graphs, 50, 2).samples);
}

TEST(AssembleDataset, EmptySplit) {
    EXPECT_EQ(code_of([] { assemble_dataset(std::span<const CanonicalGraph>{}, 10, 0); }), ErrorCode::EmptySplit);
}

TEST(GraphPool, Sizes) {
    EXPECT_EQ(graph_pool(5, 0, 0).size(), 2u + 6u + 21u);
    const auto pool = graph_pool(9, 7, 0, 8);
    EXPECT_EQ(pool.size(), 14u);
    for (const auto& cg : pool) EXPECT_EQ(canonical_key(cg.graph), cg.key);
    EXPECT_EQ(code_of([] { graph_pool(11, 1, 0); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { graph_pool(5, 1, 0, 2); }), ErrorCode::InvalidArgument);
}

TEST(GenerateCorpus, WritesDisjointSplitsDeterministically) {
    GenOptions opts;
    opts.max_nodes = 6;
    opts.train_samples = 400;
    opts.test_samples = 200;
    opts.seed = 5;
    const auto a = scratch_dir("corpus_a");
    const auto b = scratch_dir("corpus_b");
    const auto sa = generate_corpus(opts, a);
    generate_corpus(opts, b);

    for (const char* f : {"train.txt", "test.txt", "graphs_train.txt", "graphs_test.txt", "manifest.json"}) {
        ASSERT_TRUE(std::filesystem::exists(a / f)) << f;
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }

    EXPECT_EQ(sa.train_graphs + sa.test_graphs, 2u + 6u + 21u + 112u);
    std::istringstream tr(slurp(a / "graphs_train.txt"));
    std::istringstream te(slurp(a / "graphs_test.txt"));
    const auto train = read_graph_set(tr);
    const auto test = read_graph_set(te);
    std::set<CanonicalKey> train_keys;
    for (const auto& cg : train) train_keys.insert(cg.key);
    std::set<CanonicalKey> test_keys;
    for (const auto& cg : test) {
        EXPECT_FALSE(train_keys.contains(cg.key));
        test_keys.insert(cg.key);
    }

    // Every test sample's graph belongs to the test split.
    const auto test_samples = read_dataset(a / "test.txt");
    EXPECT_EQ(test_samples.size(), 200u);
    for (const auto& s : test_samples) EXPECT_TRUE(test_keys.contains(canonical_key(s.graph())));
    EXPECT_EQ(read_dataset(a / "train.txt"), sa.train.samples);

    const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
    EXPECT_EQ(manifest["seed"], 5);
    EXPECT_EQ(manifest["split_hash"], sa.split_hash);
    EXPECT_EQ(manifest["train"]["graphs"], sa.train_graphs);
    EXPECT_EQ(manifest["test"]["samples"], 200);

    opts.seed = 6;
    const auto c = scratch_dir("corpus_c");
    EXPECT_NE(generate_corpus(opts, c).split_hash, sa.split_hash);

    for (const auto& d : {a, b, c}) std::filesystem::remove_all(d);
}

TEST(ReadDataset, MissingFile) {
    EXPECT_EQ(code_of([] { read_dataset("/nonexistent/snav/file.txt"); }), ErrorCode::IoFailure);
}
