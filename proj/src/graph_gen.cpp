#include "snav/graph_gen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "snav/rng.hpp"

namespace snav {

namespace {

using AdjMasks = std::vector<std::uint64_t>;

AdjMasks masks_of(const Graph& g) {
    AdjMasks adj(static_cast<std::size_t>(g.n_nodes()), 0);
    for (const Edge& e : g.edges()) {
        adj[static_cast<std::size_t>(e.u)] |= std::uint64_t{1} << e.v;
        adj[static_cast<std::size_t>(e.v)] |= std::uint64_t{1} << e.u;
    }
    return adj;
}

bool adjacent(const AdjMasks& adj, int a, int b) { return (adj[static_cast<std::size_t>(a)] >> b) & 1U; }

// Colour refinement starting from degrees. Colours are ranks of sorted
// signatures, so the resulting partition does not depend on node labels.
std::vector<int> refine_colours(const AdjMasks& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> colour(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) colour[static_cast<std::size_t>(x)] = std::popcount(adj[static_cast<std::size_t>(x)]);
    int distinct = -1;
    for (;;) {
        std::vector<std::vector<int>> sig(static_cast<std::size_t>(n));
        for (int x = 0; x < n; ++x) {
            auto& s = sig[static_cast<std::size_t>(x)];
            s.push_back(colour[static_cast<std::size_t>(x)]);
            std::vector<int> nb;
            for (int y = 0; y < n; ++y) {
                if (adjacent(adj, x, y)) nb.push_back(colour[static_cast<std::size_t>(y)]);
            }
            std::sort(nb.begin(), nb.end());
            s.insert(s.end(), nb.begin(), nb.end());
        }
        auto uniq = sig;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (int x = 0; x < n; ++x) {
            colour[static_cast<std::size_t>(x)] = static_cast<int>(
                std::lower_bound(uniq.begin(), uniq.end(), sig[static_cast<std::size_t>(x)]) - uniq.begin());
        }
        const int now = static_cast<int>(uniq.size());
        if (now == distinct) break;
        distinct = now;
    }
    return colour;
}

std::size_t column_offset(int j) { return static_cast<std::size_t>(j) * static_cast<std::size_t>(j - 1) / 2; }

CanonicalKey pack_key(int n, const std::vector<std::uint8_t>& bits) {
    CanonicalKey key;
    key.bytes.assign(1 + (bits.size() + 7) / 8, 0);
    key.bytes[0] = static_cast<std::uint8_t>(n);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) key.bytes[1 + i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
    }
    return key;
}

CanonicalLabeling label_masks(const AdjMasks& adj) {
    const int n = static_cast<int>(adj.size());
    const auto colour = refine_colours(adj);

    // Positions are filled cell by cell in ascending colour order.
    std::vector<int> sorted_colours = colour;
    std::sort(sorted_colours.begin(), sorted_colours.end());

    const std::size_t n_bits = column_offset(n);
    std::vector<std::uint8_t> bits(n_bits, 0);
    std::vector<std::uint8_t> best(n_bits, 0);
    std::vector<NodeId> order(static_cast<std::size_t>(n), 0);
    std::vector<NodeId> best_order;
    bool have_best = false;
    std::uint64_t improvements = 0;
    std::uint64_t used = 0;

    std::function<void(int, bool)> descend = [&](int pos, bool below_best) {
        if (pos == n) {
            if (!have_best || below_best) {
                best = bits;
                best_order = order;
                have_best = true;
                ++improvements;
            }
            return;
        }
        const int cell = sorted_colours[static_cast<std::size_t>(pos)];
        const std::size_t off = column_offset(pos);
        for (int x = 0; x < n; ++x) {
            if (colour[static_cast<std::size_t>(x)] != cell || ((used >> x) & 1U)) continue;
            bool less = below_best;
            bool prune = false;
            for (int i = 0; i < pos; ++i) {
                const std::uint8_t b = adjacent(adj, order[static_cast<std::size_t>(i)], x) ? 1 : 0;
                bits[off + static_cast<std::size_t>(i)] = b;
                if (have_best && !less) {
                    const std::uint8_t ref = best[off + static_cast<std::size_t>(i)];
                    if (b > ref) {
                        prune = true;
                        break;
                    }
                    if (b < ref) less = true;
                }
            }
            if (prune) continue;
            order[static_cast<std::size_t>(pos)] = x;
            used |= std::uint64_t{1} << x;
            const auto before = improvements;
            descend(pos + 1, less);
            used &= ~(std::uint64_t{1} << x);
            // A new best shares this prefix, so siblings must compare against it.
            if (improvements != before) below_best = false;
        }
    };
    descend(0, false);

    return CanonicalLabeling{std::move(best_order), pack_key(n, best)};
}

Graph graph_from_masks_unchecked(const AdjMasks& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (adjacent(adj, u, v)) edges.emplace_back(u, v);
        }
    }
    return validate_graph(n, edges);
}

// Relabels so that order[position] becomes node `position`.
AdjMasks apply_order(const AdjMasks& adj, const std::vector<NodeId>& order) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> pos_of(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) pos_of[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])] = p;
    AdjMasks out(static_cast<std::size_t>(n), 0);
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            if (adjacent(adj, u, v)) {
                out[static_cast<std::size_t>(pos_of[static_cast<std::size_t>(u)])] |= std::uint64_t{1}
                                                                                       << pos_of[static_cast<std::size_t>(v)];
            }
        }
    }
    return out;
}

bool masks_connected(const AdjMasks& adj) {
    const int n = static_cast<int>(adj.size());
    const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    std::uint64_t seen = 1;
    std::uint64_t frontier = 1;
    while (frontier) {
        std::uint64_t next = 0;
        for (int x = 0; x < n; ++x) {
            if ((frontier >> x) & 1U) next |= adj[static_cast<std::size_t>(x)];
        }
        frontier = next & ~seen;
        seen |= next;
    }
    return seen == all;
}

}  // namespace

std::string CanonicalKey::hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

CanonicalKey CanonicalKey::from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw Error(ErrorCode::ParseError, "odd-length key hex");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw Error(ErrorCode::ParseError, std::string("bad hex digit '") + c + "'");
    };
    CanonicalKey key;
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        key.bytes.push_back(static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
    }
    return key;
}

CanonicalLabeling canonical_labeling(const Graph& g) { return label_masks(masks_of(g)); }

CanonicalKey canonical_key(const Graph& g) { return canonical_labeling(g).key; }

CanonicalGraph canonicalize(const Graph& g) {
    auto lab = canonical_labeling(g);
    std::vector<NodeId> perm(static_cast<std::size_t>(g.n_nodes()));
    for (int p = 0; p < g.n_nodes(); ++p) perm[static_cast<std::size_t>(lab.order[static_cast<std::size_t>(p)])] = p;
    return CanonicalGraph{g.relabeled(perm), std::move(lab.key)};
}

std::vector<CanonicalGraph> enumerate_connected(int n) {
    if (n < 2 || n > 7) {
        throw Error(ErrorCode::UnsupportedSize,
                    "exhaustive enumeration supports n <= 7; use sample_random_connected for larger graphs");
    }
    // Edge-augmentation over every isomorphism class (connected or not): each
    // graph with m+1 edges arises from some graph with m edges plus one edge.
    std::map<CanonicalKey, AdjMasks> level;
    level.emplace(pack_key(n, std::vector<std::uint8_t>(column_offset(n), 0)), AdjMasks(static_cast<std::size_t>(n), 0));
    std::vector<AdjMasks> connected;
    const int max_edges = n * (n - 1) / 2;
    for (int m = 0; m <= max_edges; ++m) {
        std::map<CanonicalKey, AdjMasks> next;
        for (const auto& [key, adj] : level) {
            if (masks_connected(adj)) connected.push_back(adj);
            for (int u = 0; u < n; ++u) {
                for (int v = u + 1; v < n; ++v) {
                    if (adjacent(adj, u, v)) continue;
                    AdjMasks grown = adj;
                    grown[static_cast<std::size_t>(u)] |= std::uint64_t{1} << v;
                    grown[static_cast<std::size_t>(v)] |= std::uint64_t{1} << u;
                    auto lab = label_masks(grown);
                    if (!next.contains(lab.key)) next.emplace(std::move(lab.key), apply_order(grown, lab.order));
                }
            }
        }
        level = std::move(next);
    }

    std::vector<CanonicalGraph> out;
    out.reserve(connected.size());
    for (const auto& adj : connected) {
        auto lab = label_masks(adj);
        out.push_back(CanonicalGraph{graph_from_masks_unchecked(apply_order(adj, lab.order)), std::move(lab.key)});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
    return out;
}

Graph sample_random_connected(int n, std::uint64_t seed, std::optional<int> edge_count) {
    if (n < 2 || n > kMaxNodes) throw Error(ErrorCode::UnsupportedSize, "node count " + std::to_string(n));
    const int max_edges = n * (n - 1) / 2;
    if (edge_count && (*edge_count < n - 1 || *edge_count > max_edges)) {
        throw Error(ErrorCode::InvalidArgument, "edge count outside [n-1, n(n-1)/2]");
    }
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(max_edges));
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    }
    Rng rng(seed);
    for (;;) {
        const int m = edge_count ? *edge_count : static_cast<int>(rng.between(n - 1, max_edges));
        auto pool = pairs;
        // Partial Fisher-Yates: the first m slots are a uniform m-subset.
        for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        std::vector<Edge> chosen;
        chosen.reserve(static_cast<std::size_t>(m));
        for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
            chosen.push_back(Edge{pool[i].first, pool[i].second});
        }
        if (!is_connected(n, chosen)) continue;
        pool.resize(static_cast<std::size_t>(m));
        return validate_graph(n, pool);
    }
}

TrainTestSplit split_train_test(std::span<const CanonicalGraph> graphs, double ratio, std::uint64_t seed) {
    if (graphs.empty()) throw Error(ErrorCode::EmptyInput, "no graphs to split");
    if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorCode::InvalidArgument, "split ratio must lie in (0, 1)");

    std::vector<CanonicalGraph> pool(graphs.begin(), graphs.end());
    std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
    pool.erase(std::unique(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.key == b.key; }),
               pool.end());
    Rng rng(seed);
    rng.shuffle(std::span<CanonicalGraph>(pool));

    const auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(pool.size())));
    TrainTestSplit split;
    split.train.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.assign(pool.begin() + static_cast<std::ptrdiff_t>(n_train), pool.end());
    return split;
}

Remap Remap::identity(int n_nodes, std::size_t n_edges, std::size_t n_listed_nodes) {
    Remap r;
    r.node_permutation.resize(static_cast<std::size_t>(n_nodes));
    std::iota(r.node_permutation.begin(), r.node_permutation.end(), 0);
    r.edge_order.resize(n_edges);
    std::iota(r.edge_order.begin(), r.edge_order.end(), std::size_t{0});
    r.flips.assign(n_edges, false);
    r.node_list_order.resize(n_listed_nodes);
    std::iota(r.node_list_order.begin(), r.node_list_order.end(), std::size_t{0});
    return r;
}

Remap Remap::random(int n_nodes, std::size_t n_edges, std::uint64_t seed) {
    Remap r = identity(n_nodes, n_edges);
    r.seed = seed;
    Rng rng(seed);
    rng.shuffle(std::span<NodeId>(r.node_permutation));
    rng.shuffle(std::span<std::size_t>(r.edge_order));
    for (std::size_t i = 0; i < n_edges; ++i) r.flips[i] = rng.coin();
    rng.shuffle(std::span<std::size_t>(r.node_list_order));
    return r;
}

Remap Remap::inverse() const {
    Remap inv;
    inv.seed = seed;
    inv.node_permutation.resize(node_permutation.size());
    for (std::size_t i = 0; i < node_permutation.size(); ++i) {
        inv.node_permutation[static_cast<std::size_t>(node_permutation[i])] = static_cast<NodeId>(i);
    }
    inv.edge_order.resize(edge_order.size());
    for (std::size_t i = 0; i < edge_order.size(); ++i) inv.edge_order[edge_order[i]] = i;
    inv.flips.resize(flips.size());
    for (std::size_t j = 0; j < flips.size(); ++j) inv.flips[j] = flips[inv.edge_order[j]];
    inv.node_list_order.resize(node_list_order.size());
    for (std::size_t i = 0; i < node_list_order.size(); ++i) inv.node_list_order[node_list_order[i]] = i;
    return inv;
}

SampleParts apply_remap(const SampleParts& sample, const Remap& r) {
    if (r.node_permutation.size() != static_cast<std::size_t>(sample.n_nodes) ||
        r.edge_order.size() != sample.edges.size() || r.flips.size() != sample.edges.size() ||
        r.node_list_order.size() != sample.nodes.size()) {
        throw Error(ErrorCode::SizeMismatch, "remap does not match sample dimensions");
    }
    auto relabel = [&](NodeId x) {
        if (x < 0 || x >= sample.n_nodes) throw Error(ErrorCode::NodeOutOfRange, "sample node outside graph");
        return r.node_permutation[static_cast<std::size_t>(x)];
    };
    SampleParts out;
    out.n_nodes = sample.n_nodes;
    out.edges.reserve(sample.edges.size());
    for (std::size_t i = 0; i < sample.edges.size(); ++i) {
        const auto& [a, b] = sample.edges[r.edge_order[i]];
        out.edges.emplace_back(r.flips[i] ? EdgeListing{relabel(b), relabel(a)} : EdgeListing{relabel(a), relabel(b)});
    }
    out.nodes.reserve(sample.nodes.size());
    for (std::size_t i = 0; i < sample.nodes.size(); ++i) out.nodes.push_back(relabel(sample.nodes[r.node_list_order[i]]));
    out.query = Query{relabel(sample.query.source), relabel(sample.query.target)};
    out.path.nodes.reserve(sample.path.nodes.size());
    for (NodeId x : sample.path.nodes) out.path.nodes.push_back(relabel(x));
    return out;
}

void write_graph_set(std::ostream& out, std::span<const CanonicalGraph> graphs) {
    for (const auto& cg : graphs) {
        out << cg.key.hex() << ' ' << cg.graph.n_nodes() << ' ' << cg.graph.n_edges();
        for (const Edge& e : cg.graph.edges()) out << ' ' << e.u << ' ' << e.v;
        out << '\n';
    }
}

std::vector<CanonicalGraph> read_graph_set(std::istream& in) {
    std::vector<CanonicalGraph> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string hex;
        int n = 0;
        int m = 0;
        if (!(fields >> hex >> n >> m) || m < 0) {
            throw Error(ErrorCode::ParseError, "graph set line " + std::to_string(line_no));
        }
        std::vector<std::pair<int, int>> edges(static_cast<std::size_t>(m));
        for (auto& [u, v] : edges) {
            if (!(fields >> u >> v)) throw Error(ErrorCode::ParseError, "graph set line " + std::to_string(line_no));
        }
        auto g = validate_graph(n, edges);
        out.push_back(CanonicalGraph{std::move(g), CanonicalKey::from_hex(hex)});
    }
    return out;
}

void write_graph_set_manifest(std::ostream& out, const GraphSetManifest& m) {
    nlohmann::ordered_json j;
    j["generator_version"] = m.generator_version;
    j["node_counts"] = m.node_counts;
    j["count"] = m.count;
    j["seed"] = m.seed;
    out << j.dump(2) << '\n';
}

}  // namespace snav
