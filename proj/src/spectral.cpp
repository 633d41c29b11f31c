#include "snav/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace snav {

SymMatrix SymMatrix::identity(std::size_t dim) {
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
}

LineGraph line_graph(const Graph& g) {
    if (g.n_edges() < 2) throw Error(ErrorCode::TooFewEdges, "line graph needs at least two base edges");
    LineGraph lg;
    lg.edge_index = g.edges();
    std::vector<std::vector<int>> incident(static_cast<std::size_t>(g.n_nodes()));
    for (std::size_t i = 0; i < lg.edge_index.size(); ++i) {
        incident[static_cast<std::size_t>(lg.edge_index[i].u)].push_back(static_cast<int>(i));
        incident[static_cast<std::size_t>(lg.edge_index[i].v)].push_back(static_cast<int>(i));
    }
    for (const auto& ids : incident) {
        for (std::size_t a = 0; a < ids.size(); ++a) {
            for (std::size_t b = a + 1; b < ids.size(); ++b) {
                lg.adjacency.emplace_back(std::min(ids[a], ids[b]), std::max(ids[a], ids[b]));
            }
        }
    }
    // Base graph is simple, so two edges share at most one endpoint: no duplicates.
    std::sort(lg.adjacency.begin(), lg.adjacency.end());
    lg.degree.assign(lg.edge_index.size(), 0);
    for (const auto& [i, j] : lg.adjacency) {
        ++lg.degree[static_cast<std::size_t>(i)];
        ++lg.degree[static_cast<std::size_t>(j)];
    }
    return lg;
}

namespace {

SymMatrix normalized_from(std::size_t dim, std::span<const std::pair<int, int>> pairs, std::span<const int> degree) {
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        if (degree[i] > 0) m.set(i, i, 1.0);
    }
    for (const auto& [i, j] : pairs) {
        const double d = static_cast<double>(degree[static_cast<std::size_t>(i)]) *
                         static_cast<double>(degree[static_cast<std::size_t>(j)]);
        m.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), -1.0 / std::sqrt(d));
    }
    return m;
}

}  // namespace

SymMatrix normalized_laplacian(const Graph& g) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(g.n_edges());
    for (const Edge& e : g.edges()) pairs.emplace_back(e.u, e.v);
    std::vector<int> degree(static_cast<std::size_t>(g.n_nodes()));
    for (int x = 0; x < g.n_nodes(); ++x) degree[static_cast<std::size_t>(x)] = g.degree(x);
    return normalized_from(static_cast<std::size_t>(g.n_nodes()), pairs, degree);
}

SymMatrix normalized_laplacian(const LineGraph& lg) { return normalized_from(lg.n_nodes(), lg.adjacency, lg.degree); }

EigenDecomposition eig_sym(const SymMatrix& m, double tol, int max_sweeps) {
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "eigen tolerance must be positive");
    const std::size_t n = m.dim();
    std::vector<double> a(n * n);
    std::vector<double> v(n * n, 0.0);
    auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * n + j]; };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) A(i, j) = m(i, j);
        V(i, i) = 1.0;
    }

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) s += A(i, j) * A(i, j);
            }
        }
        return std::sqrt(s);
    };

    const double threshold = tol * static_cast<double>(std::max<std::size_t>(n, 1));
    int sweeps = 0;
    while (off_norm() > threshold) {
        if (sweeps == max_sweeps) {
            throw Error(ErrorCode::NoConvergence, "Jacobi did not converge in " + std::to_string(max_sweeps) + " sweeps");
        }
        ++sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (apq == 0.0) continue;
                const double tau = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double kp = A(k, p);
                    const double kq = A(k, q);
                    A(k, p) = c * kp - s * kq;
                    A(k, q) = s * kp + c * kq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double pk = A(p, k);
                    const double qk = A(q, k);
                    A(p, k) = c * pk - s * qk;
                    A(q, k) = s * pk + c * qk;
                }
                A(p, q) = 0.0;
                A(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double kp = V(k, p);
                    const double kq = V(k, q);
                    V(k, p) = c * kp - s * kq;
                    V(k, q) = s * kp + c * kq;
                }
            }
        }
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return A(x, x) < A(y, y); });

    EigenDecomposition ed;
    ed.dim = n;
    ed.sweeps = sweeps;
    ed.eigenvalues.resize(n);
    ed.eigenvectors.resize(n * n);
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t src = idx[c];
        double lambda = A(src, src);
        if (std::abs(lambda) < tol) lambda = 0.0;
        ed.eigenvalues[c] = lambda;

        double max_abs = 0.0;
        for (std::size_t k = 0; k < n; ++k) max_abs = std::max(max_abs, std::abs(V(k, src)));
        // Magnitudes equal up to rounding count as tied; the first one decides.
        double sign = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (std::abs(V(k, src)) >= max_abs * (1.0 - 1e-9)) {
                sign = V(k, src) < 0.0 ? -1.0 : 1.0;
                break;
            }
        }
        for (std::size_t k = 0; k < n; ++k) ed.eigenvectors[c * n + k] = sign * V(k, src);
    }
    ed.residual_tol = std::max(eigen_residual(m, ed), orthonormality_error(ed));
    return ed;
}

double eigen_residual(const SymMatrix& m, const EigenDecomposition& ed) {
    const std::size_t n = ed.dim;
    double worst = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        const auto vec = ed.vector(c);
        for (std::size_t i = 0; i < n; ++i) {
            double mv = 0.0;
            for (std::size_t j = 0; j < n; ++j) mv += m(i, j) * vec[j];
            worst = std::max(worst, std::abs(mv - ed.eigenvalues[c] * vec[i]));
        }
    }
    return worst;
}

double orthonormality_error(const EigenDecomposition& ed) {
    const std::size_t n = ed.dim;
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            const auto x = ed.vector(a);
            const auto y = ed.vector(b);
            const double dot = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
            worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
    }
    return worst;
}

double reconstruction_error(const SymMatrix& m, const EigenDecomposition& ed) {
    const std::size_t n = ed.dim;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < n; ++c) s += ed.eigenvectors[c * n + i] * ed.eigenvalues[c] * ed.eigenvectors[c * n + j];
            worst = std::max(worst, std::abs(s - m(i, j)));
        }
    }
    return worst;
}

bool SpectralBasis::simple_spectrum(double tol) const {
    for (std::size_t i = 1; i < nonzero_values.size(); ++i) {
        if (nonzero_values[i] - nonzero_values[i - 1] < tol) return false;
    }
    return true;
}

SpectralBasis spectral_basis(const Graph& g) {
    const LineGraph lg = line_graph(g);
    const EigenDecomposition ed = eig_sym(normalized_laplacian(lg));
    SpectralBasis basis;
    basis.edges = lg.edge_index;
    basis.eigenvalues = ed.eigenvalues;
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < ed.dim; ++c) {
        if (ed.eigenvalues[c] >= kZeroEigenvalue) {
            cols.push_back(c);
            basis.nonzero_values.push_back(ed.eigenvalues[c]);
        }
    }
    const std::size_t rows = basis.edges.size();
    basis.coefficients.resize(rows * cols.size());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            basis.coefficients[r * cols.size() + j] = ed.vector(cols[j])[r];
        }
    }
    return basis;
}

SpectralEmbedding::SpectralEmbedding(std::vector<Edge> edges, std::size_t k, std::vector<double> coords)
    : edges_(std::move(edges)), k_(k), coords_(std::move(coords)) {
    if (coords_.size() != edges_.size() * k_) throw Error(ErrorCode::SizeMismatch, "embedding coordinate count");
}

std::size_t SpectralEmbedding::row_of(Edge e) const {
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) {
        throw Error(ErrorCode::InvalidArgument, "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") not embedded");
    }
    return static_cast<std::size_t>(it - edges_.begin());
}

SpectralEmbedding embedding_from_basis(const SpectralBasis& basis, std::size_t k) {
    if (k < 1 || k > basis.n_nonzero()) {
        throw Error(ErrorCode::KOutOfRange,
                    "k=" + std::to_string(k) + " outside [1, " + std::to_string(basis.n_nonzero()) + "]");
    }
    const std::size_t width = basis.n_nonzero();
    std::vector<double> coords;
    coords.reserve(basis.edges.size() * k);
    for (std::size_t r = 0; r < basis.edges.size(); ++r) {
        for (std::size_t j = 0; j < k; ++j) coords.push_back(basis.coefficients[r * width + j]);
    }
    return SpectralEmbedding(basis.edges, k, std::move(coords));
}

SpectralEmbedding edge_embeddings(const Graph& g, std::size_t k) { return embedding_from_basis(spectral_basis(g), k); }

double l2_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace snav
