#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "snav/graph.hpp"
#include "snav/graph_gen.hpp"

using namespace snav;

namespace {

using Pairs = std::vector<std::pair<int, int>>;

Graph make(int n, Pairs edges) { return validate_graph(n, edges); }

Graph path_graph(int n) {
    Pairs e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return make(n, e);
}

Graph cycle_graph(int n) {
    Pairs e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return make(n, e);
}

Graph complete_graph(int n) {
    Pairs e;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    }
    return make(n, e);
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

std::vector<std::vector<int>> as_vectors(const ShortestPaths& sp) {
    std::vector<std::vector<int>> out;
    for (const auto& p : sp.paths) out.push_back(p.nodes);
    return out;
}

}  // namespace

TEST(ValidateGraph, Triangle) {
    const Graph g = make(3, {{0, 1}, {1, 2}, {0, 2}});
    EXPECT_EQ(g.n_nodes(), 3);
    EXPECT_EQ(g.n_edges(), 3u);
    EXPECT_EQ(g.neighbors(0), (std::vector<NodeId>{1, 2}));
}

TEST(ValidateGraph, RejectsSelfLoop) {
    EXPECT_EQ(code_of([] { make(3, {{0, 0}, {1, 2}}); }), ErrorCode::SelfLoop);
}

TEST(ValidateGraph, RejectsDisconnected) {
    EXPECT_EQ(code_of([] { make(4, {{0, 1}, {2, 3}}); }), ErrorCode::Disconnected);
}

TEST(ValidateGraph, RejectsOutOfRange) {
    EXPECT_EQ(code_of([] { make(3, {{0, 1}, {1, 3}}); }), ErrorCode::NodeOutOfRange);
    EXPECT_EQ(code_of([] { make(3, {{-1, 1}, {1, 2}}); }), ErrorCode::NodeOutOfRange);
}

TEST(ValidateGraph, CollapsesSymmetricListings) {
    const Graph g = make(3, {{0, 1}, {1, 0}, {2, 1}, {1, 2}});
    EXPECT_EQ(g.n_edges(), 2u);
    EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
}

TEST(ValidateGraph, SizeLimits) {
    EXPECT_EQ(code_of([] { make(65, {}); }), ErrorCode::TooManyNodes);
    EXPECT_EQ(code_of([] { make(1, {}); }), ErrorCode::TooManyNodes);
}

TEST(BfsShortestLength, Examples) {
    EXPECT_EQ(bfs_shortest_length(path_graph(4), {0, 3}), 4);
    EXPECT_EQ(bfs_shortest_length(complete_graph(3), {0, 2}), 2);
    EXPECT_EQ(bfs_shortest_length(cycle_graph(5), {0, 2}), 3);
}

TEST(BfsShortestLength, RejectsBadQuery) {
    EXPECT_EQ(code_of([] { bfs_shortest_length(path_graph(3), {1, 1}); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { bfs_shortest_length(path_graph(3), {0, 5}); }), ErrorCode::NodeOutOfRange);
}

TEST(AllShortestPaths, FourCycle) {
    const auto sp = all_shortest_paths(cycle_graph(4), {0, 2});
    EXPECT_EQ(as_vectors(sp), (std::vector<std::vector<int>>{{0, 1, 2}, {0, 3, 2}}));
    EXPECT_FALSE(sp.truncated);
}

TEST(AllShortestPaths, Chain) {
    EXPECT_EQ(as_vectors(all_shortest_paths(path_graph(4), {0, 3})), (std::vector<std::vector<int>>{{0, 1, 2, 3}}));
}

TEST(AllShortestPaths, CompleteGraphMatchesBruteForce) {
    const Graph k5 = complete_graph(5);
    Pairs e;
    for (const auto& edge : k5.edges()) e.emplace_back(edge.u, edge.v);
    const auto expected = oracle::brute_shortest_paths(oracle::to_matrix(5, e), 0, 1);
    EXPECT_EQ(expected, (std::vector<std::vector<int>>{{0, 1}}));
    EXPECT_EQ(as_vectors(all_shortest_paths(k5, {0, 1})), expected);
}

TEST(AllShortestPaths, TruncatesAtCap) {
    // K2,2,...: a "ladder" of diamonds multiplies path counts.
    Pairs e;
    const int layers = 6;
    // Nodes: 0, then pairs (2i-1, 2i) for i=1..layers, then the sink.
    const int sink = 2 * layers + 1;
    for (int i = 1; i <= layers; ++i) {
        const int a = 2 * i - 1;
        const int b = 2 * i;
        if (i == 1) {
            e.emplace_back(0, a);
            e.emplace_back(0, b);
        } else {
            for (int p : {2 * i - 3, 2 * i - 2}) {
                e.emplace_back(p, a);
                e.emplace_back(p, b);
            }
        }
    }
    e.emplace_back(2 * layers - 1, sink);
    e.emplace_back(2 * layers, sink);
    const Graph g = make(sink + 1, e);
    EXPECT_EQ(all_shortest_paths(g, {0, sink}).paths.size(), 64u);
    const auto capped = all_shortest_paths(g, {0, sink}, 10);
    EXPECT_EQ(capped.paths.size(), 10u);
    EXPECT_TRUE(capped.truncated);
}

TEST(GraphProperties, SymmetryAndLengthAgreement) {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(trial % 6);
        const Graph g = validate_graph(n, oracle::random_connected(n, 0.3, gen));
        for (int s = 0; s < n; ++s) {
            for (int t = 0; t < n; ++t) {
                if (s == t) continue;
                const int len = bfs_shortest_length(g, {s, t});
                ASSERT_EQ(len, bfs_shortest_length(g, {t, s}));
                ASSERT_GE(len, 2);
                ASSERT_LE(len, n);
                for (const auto& p : all_shortest_paths(g, {s, t}).paths) {
                    ASSERT_EQ(static_cast<int>(p.length()), len);
                    ASSERT_TRUE(is_valid_path(g, p));
                    ASSERT_EQ(p.nodes.front(), s);
                    ASSERT_EQ(p.nodes.back(), t);
                }
            }
        }
    }
}

TEST(GraphProperties, RelabelingMapsShortestPaths) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 4 + static_cast<int>(trial % 4);
        const Graph g = validate_graph(n, oracle::random_connected(n, 0.35, gen));
        const auto perm = oracle::random_permutation(n, gen);
        const Graph h = g.relabeled(perm);
        for (int s = 0; s < n; ++s) {
            for (int t = 0; t < n; ++t) {
                if (s == t) continue;
                std::vector<std::vector<int>> mapped;
                for (const auto& p : all_shortest_paths(g, {s, t}).paths) {
                    std::vector<int> q;
                    for (int x : p.nodes) q.push_back(perm[static_cast<std::size_t>(x)]);
                    mapped.push_back(q);
                }
                std::sort(mapped.begin(), mapped.end());
                ASSERT_EQ(mapped, as_vectors(all_shortest_paths(h, {perm[static_cast<std::size_t>(s)],
                                                                   perm[static_cast<std::size_t>(t)]})));
            }
        }
    }
}

TEST(GraphProperties, MatchesBruteForceOnSmallEnumeratedGraphs) {
    for (int n = 3; n <= 5; ++n) {
        for (const auto& cg : enumerate_connected(n)) {
            Pairs e;
            for (const auto& edge : cg.graph.edges()) e.emplace_back(edge.u, edge.v);
            const auto a = oracle::to_matrix(n, e);
            for (int s = 0; s < n; ++s) {
                for (int t = 0; t < n; ++t) {
                    if (s != t) ASSERT_EQ(as_vectors(all_shortest_paths(cg.graph, {s, t})),
                                          oracle::brute_shortest_paths(a, s, t));
                }
            }
        }
    }
}

TEST(IsValidPath, RejectsRepeatsGapsAndShortPaths) {
    const Graph c4 = cycle_graph(4);
    EXPECT_TRUE(is_valid_path(c4, Path{{0, 1, 2}}));
    EXPECT_FALSE(is_valid_path(c4, Path{{0, 2}}));
    EXPECT_FALSE(is_valid_path(c4, Path{{0, 1, 0}}));
    EXPECT_FALSE(is_valid_path(c4, Path{{0}}));
}

TEST(GraphText, ReadWrite) {
    std::istringstream in("4 3\n0 1\n1 2\n2 3\n");
    const Graph g = read_graph_text(in);
    EXPECT_EQ(g, path_graph(4));
    std::ostringstream out;
    write_graph_text(out, g);
    EXPECT_EQ(out.str(), "4 3\n0 1\n1 2\n2 3\n");
}

TEST(GraphText, Errors) {
    std::istringstream truncated("3 2\n0 1\n");
    EXPECT_EQ(code_of([&] { read_graph_text(truncated); }), ErrorCode::ParseError);
    std::istringstream garbage("x y");
    EXPECT_EQ(code_of([&] { read_graph_text(garbage); }), ErrorCode::ParseError);
}
