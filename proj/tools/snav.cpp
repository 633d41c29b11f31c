// snav: command-line front end for graph generation, spectral dumps,
// Spectral Line Navigation solves and evaluation reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "snav/dataset.hpp"
#include "snav/eval.hpp"
#include "snav/graph_gen.hpp"
#include "snav/sln.hpp"
#include "snav/spectral.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitFailure = 1;

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

struct SlnFlags {
    std::size_t k = 0;
    bool adaptive = false;
    bool no_exclude_visited = false;

    void add_to(CLI::App& app) {
        auto* k_opt = app.add_option("--k", k, "Fixed number of non-zero eigenvectors")->check(CLI::PositiveNumber);
        auto* a_opt = app.add_flag("--adaptive", adaptive, "Escalate k until the path is optimal (default)");
        k_opt->excludes(a_opt);
        app.add_flag("--no-exclude-visited", no_exclude_visited, "Allow steps back onto visited nodes");
    }

    snav::SlnConfig config() const {
        snav::SlnConfig cfg;
        if (k > 0) cfg.k = k;
        cfg.exclude_visited = !no_exclude_visited;
        return cfg;
    }
};

void print_matrix(const snav::EdgeDistanceMatrix& d) {
    std::cout << "  cols";
    for (const auto& c : d.cols) std::cout << ' ' << c.edge.u << '-' << c.edge.v;
    std::cout << '\n';
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
        std::cout << "  row " << d.rows[r].edge.u << '-' << d.rows[r].edge.v;
        for (std::size_t c = 0; c < d.cols.size(); ++c) std::cout << ' ' << num(d.at(r, c));
        std::cout << '\n';
    }
}

void print_result(const snav::SlnResult& r) {
    std::cout << "path";
    for (auto x : r.path.nodes) std::cout << ' ' << x;
    std::cout << "\nlength " << r.path.length() << "\nshortest_length " << r.shortest_length << "\nk_used " << r.k_used
              << "\nstatus " << snav::to_string(r.status) << '\n';
}

int run_solve(const std::string& graph_file, int src, int tgt, const SlnFlags& flags, bool trace) {
    const auto g = snav::read_graph_file(graph_file);
    const snav::Query q{src, tgt};
    snav::check_query(g, q);
    const auto basis = snav::spectral_basis(g);
    auto cfg = flags.config();
    snav::SlnResult result = snav::sln_solve(g, basis, q, cfg);
    print_result(result);
    if (trace) {
        snav::SlnTrace t;
        static_cast<void>(snav::sln_find_path(g, basis, q, result.k_used, cfg, &t));
        for (std::size_t i = 0; i < t.steps.size(); ++i) {
            std::cout << "step " << i << " current " << result.path.nodes[i] << '\n';
            print_matrix(t.steps[i]);
        }
    }
    return 0;
}

int run_spectra(const std::string& graph_file, std::size_t k) {
    const auto g = snav::read_graph_file(graph_file);
    const auto basis = snav::spectral_basis(g);
    const std::size_t width = k ? k : basis.n_nonzero();
    const auto emb = snav::embedding_from_basis(basis, width);
    std::cout << "edges " << basis.edges.size() << '\n';
    for (std::size_t i = 0; i < basis.edges.size(); ++i) {
        std::cout << "edge " << i << ' ' << basis.edges[i].u << ' ' << basis.edges[i].v << '\n';
    }
    std::cout << "eigenvalues";
    for (double v : basis.eigenvalues) std::cout << ' ' << num(v);
    std::cout << "\nembedding k=" << width << '\n';
    for (std::size_t i = 0; i < emb.edges().size(); ++i) {
        std::cout << emb.edges()[i].u << ' ' << emb.edges()[i].v;
        for (double c : emb.coords(i)) std::cout << ' ' << num(c);
        std::cout << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral Line Navigation toolkit"};
    app.require_subcommand(1);

    snav::GenOptions gen_opts;
    std::string gen_out;
    std::size_t test_samples = 0;
    auto* gen = app.add_subcommand("gen", "Enumerate graphs, split them and write tokenized datasets");
    gen->add_option("--max-nodes", gen_opts.max_nodes, "Largest graph size (3..10)")->check(CLI::Range(3, 10));
    gen->add_option("--min-nodes", gen_opts.min_nodes, "Smallest graph size")->check(CLI::Range(3, 10));
    gen->add_option("--samples", gen_opts.train_samples, "Training samples to draw");
    gen->add_option("--test-samples", test_samples, "Test samples to draw (default: half of --samples)");
    gen->add_option("--random-graphs", gen_opts.random_per_size, "Random graphs per size above 7 nodes");
    gen->add_option("--ratio", gen_opts.train_ratio, "Training fraction of graphs");
    gen->add_option("--seed", gen_opts.seed, "Random seed");
    gen->add_option("--out", gen_out, "Output directory")->required();

    std::string solve_graph;
    int src = -1;
    int tgt = -1;
    bool solve_trace = false;
    SlnFlags solve_flags;
    auto* solve = app.add_subcommand("solve", "Run SLN on one query");
    solve->add_option("--graph", solve_graph, "Graph file ('n m' then 'u v' lines)")->required();
    solve->add_option("--src", src, "Source node")->required();
    solve->add_option("--tgt", tgt, "Target node")->required();
    solve->add_flag("--trace", solve_trace, "Print the edge distance matrix of every step");
    solve_flags.add_to(*solve);

    std::string eval_graphs;
    std::string eval_out;
    std::string eval_queries = "all";
    std::string eval_format = "csv";
    int eval_min = 3;
    int eval_max = 6;
    std::size_t eval_random = 200;
    std::uint64_t eval_seed = 0;
    unsigned eval_threads = 0;
    SlnFlags eval_flags;
    auto* eval = app.add_subcommand("eval", "Evaluate SLN against BFS and emit report tables");
    eval->add_option("--graphs", eval_graphs, "Graph set file (key n m u v ...); default: generated pool");
    eval->add_option("--min-nodes", eval_min, "Smallest generated graph size")->check(CLI::Range(3, 10));
    eval->add_option("--max-nodes", eval_max, "Largest generated graph size")->check(CLI::Range(3, 10));
    eval->add_option("--random-graphs", eval_random, "Random graphs per size above 7 nodes");
    eval->add_option("--queries", eval_queries, "all | sample:N");
    eval->add_option("--seed", eval_seed, "Random seed");
    eval->add_option("--threads", eval_threads, "Worker threads (0 = hardware)");
    eval->add_option("--format", eval_format, "Table format")->check(CLI::IsMember({"csv", "json-lines"}));
    eval->add_option("--out", eval_out, "Output directory")->required();
    eval_flags.add_to(*eval);

    std::string spectra_graph;
    std::size_t spectra_k = 0;
    auto* spectra = app.add_subcommand("spectra", "Dump line-graph spectrum and edge embeddings");
    spectra->add_option("--graph", spectra_graph, "Graph file")->required();
    spectra->add_option("--k", spectra_k, "Embedding width (default: all non-zero eigenvalues)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*gen) {
            gen_opts.test_samples = test_samples ? test_samples : gen_opts.train_samples / 2;
            const auto summary = snav::generate_corpus(gen_opts, gen_out);
            std::cout << "train_graphs " << summary.train_graphs << "\ntest_graphs " << summary.test_graphs
                      << "\ntrain_samples " << summary.train.samples.size() << "\ntest_samples "
                      << summary.test.samples.size() << "\nsplit_hash " << summary.split_hash << '\n';
            return 0;
        }
        if (*solve) return run_solve(solve_graph, src, tgt, solve_flags, solve_trace);
        if (*spectra) return run_spectra(spectra_graph, spectra_k);
        if (*eval) {
            std::vector<snav::CanonicalGraph> graphs;
            if (!eval_graphs.empty()) {
                std::ifstream in(eval_graphs);
                if (!in) throw snav::Error(snav::ErrorCode::IoFailure, "cannot open " + eval_graphs);
                graphs = snav::read_graph_set(in);
            } else {
                graphs = snav::graph_pool(eval_max, eval_random, eval_seed, eval_min);
            }
            const auto policy = snav::QueryPolicy::parse(eval_queries);
            const auto report = snav::evaluate_sln(graphs, policy, eval_flags.config(), eval_seed, eval_threads);
            const auto format = eval_format == "csv" ? snav::TableFormat::Csv : snav::TableFormat::JsonLines;
            snav::emit_plot_data(report, eval_out, format);
            std::ofstream out(std::filesystem::path(eval_out) / "report.json", std::ios::binary);
            if (!out) throw snav::Error(snav::ErrorCode::IoFailure, "cannot write report.json");
            out << snav::report_json(report);
            std::cout << "queries " << report.n_queries << "\naccuracy " << num(report.overall_accuracy)
                      << "\nfraction_k1 " << num(report.fraction_k1()) << '\n';
            return 0;
        }
    } catch (const snav::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == snav::ErrorCode::IoFailure ? kExitFailure : kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return 0;
}
