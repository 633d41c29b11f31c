#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "snav/graph.hpp"

namespace snav {

/// Line graph L(G): one node per base edge, adjacent when the edges share an endpoint.
struct LineGraph {
    std::vector<Edge> edge_index;  // line-graph node id -> base edge, ascending
    std::vector<std::pair<int, int>> adjacency;  // (i, j) with i < j, ascending
    std::vector<int> degree;

    std::size_t n_nodes() const { return edge_index.size(); }
};

/// Dense symmetric matrix. Only the upper triangle is stored; reads mirror it.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t dim) : dim_(dim), upper_(dim * (dim + 1) / 2, 0.0) {}

    static SymMatrix identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    double operator()(std::size_t i, std::size_t j) const { return upper_[index(i, j)]; }
    void set(std::size_t i, std::size_t j, double value) { upper_[index(i, j)] = value; }

private:
    std::size_t index(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        return j * (j + 1) / 2 + i;
    }

    std::size_t dim_ = 0;
    std::vector<double> upper_;
};

struct EigenDecomposition {
    std::vector<double> eigenvalues;   // ascending
    std::vector<double> eigenvectors;  // column-major: column c is eigenvectors[c*dim .. c*dim+dim)
    std::size_t dim = 0;
    double residual_tol = 0.0;         // max of measured eigen-residual and orthonormality error
    int sweeps = 0;

    std::span<const double> vector(std::size_t c) const { return {eigenvectors.data() + c * dim, dim}; }
};

inline constexpr double kEigenTolerance = 1e-10;
inline constexpr int kMaxJacobiSweeps = 100;
inline constexpr double kZeroEigenvalue = 1e-8;

/// Line graph with edges indexed in base sorted-edge order. Throws TooFewEdges if |E| < 2.
LineGraph line_graph(const Graph& g);

/// D^{-1/2} (D - A) D^{-1/2}.
SymMatrix normalized_laplacian(const Graph& g);
SymMatrix normalized_laplacian(const LineGraph& lg);

/// Cyclic Jacobi eigensolver.
///
/// Sweeps until the off-diagonal Frobenius norm falls to tol * dim, then sorts
/// eigenpairs ascending (stable), clamps |lambda| < tol to zero and scales each
/// eigenvector so its largest-magnitude coefficient is positive. Throws
/// NoConvergence after max_sweeps.
EigenDecomposition eig_sym(const SymMatrix& m, double tol = kEigenTolerance, int max_sweeps = kMaxJacobiSweeps);

/// Max-norm of M v - lambda v over all pairs.
double eigen_residual(const SymMatrix& m, const EigenDecomposition& ed);
/// Max-norm of V^T V - I.
double orthonormality_error(const EigenDecomposition& ed);
/// Max-norm of V diag(lambda) V^T - M.
double reconstruction_error(const SymMatrix& m, const EigenDecomposition& ed);

/// Eigenvectors of the normalized line-graph Laplacian for every non-zero
/// eigenvalue, computed once and sliced by k.
struct SpectralBasis {
    std::vector<Edge> edges;              // base edges, ascending; row id
    std::vector<double> eigenvalues;      // the full ascending spectrum
    std::vector<double> nonzero_values;   // eigenvalues >= kZeroEigenvalue
    std::vector<double> coefficients;     // row-major |E| x nonzero_values.size()

    std::size_t n_nonzero() const { return nonzero_values.size(); }
    /// True when no two non-zero eigenvalues coincide within `tol`.
    bool simple_spectrum(double tol = 1e-6) const;
};

SpectralBasis spectral_basis(const Graph& g);

/// Per-edge k-vectors: coefficient j belongs to the (j+1)-th smallest non-zero eigenvalue.
class SpectralEmbedding {
public:
    SpectralEmbedding(std::vector<Edge> edges, std::size_t k, std::vector<double> coords);

    std::size_t k() const { return k_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::span<const double> coords(std::size_t row) const { return {coords_.data() + row * k_, k_}; }
    /// Throws InvalidArgument if the edge is absent.
    std::span<const double> coords(Edge e) const { return coords(row_of(e)); }
    std::size_t row_of(Edge e) const;

private:
    std::vector<Edge> edges_;
    std::size_t k_;
    std::vector<double> coords_;
};

/// Throws KOutOfRange unless 1 <= k <= basis.n_nonzero().
SpectralEmbedding embedding_from_basis(const SpectralBasis& basis, std::size_t k);
SpectralEmbedding edge_embeddings(const Graph& g, std::size_t k);

double l2_distance(std::span<const double> a, std::span<const double> b);

}  // namespace snav
