#pragma once

#include <stdexcept>
#include <vector>

#include "gifs/graph.hpp"

namespace gifs {

/// Dense nonnegative matrix, row-major, sized by the vertex count.
struct NonnegMatrix {
    int n = 0;
    std::vector<double> a;  // n*n entries, all >= 0

    NonnegMatrix() = default;
    explicit NonnegMatrix(int order) : n(order), a(static_cast<std::size_t>(order) * order, 0.0) {}

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

NonnegMatrix matmul(const NonnegMatrix& x, const NonnegMatrix& y);
NonnegMatrix matpow(const NonnegMatrix& x, int k);
double max_row_sum_norm(const NonnegMatrix& m);

struct PerronData {
    double rho = 0.0;
    std::vector<double> right_vector;  // strictly positive, max entry 1, for irreducible input
    double residual = 0.0;             // ||M v - rho v||_inf
};

struct NotIrreducible : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// True iff the support digraph (arc i->j when M_ij > 0) is strongly connected.
bool is_irreducible(const NonnegMatrix& m);

/// gcd of directed cycle lengths in the support digraph (number of
/// peripheral eigenvalues). Requires irreducibility.
int primitivity_index(const NonnegMatrix& m);

/// Power iteration on M + I (handles periodic irreducible matrices), with
/// Collatz-Wielandt bounds as the convergence certificate and a Gelfand
/// norm cross-check at k in {32, 64}.
PerronData spectral_radius(const NonnegMatrix& m, int max_iterations = 100000);

/// n x n matrix with uv entry sum over one-step paths u->v of p^q r^s.
NonnegMatrix transfer_matrix(const GraphIFS& g, double q, double s);
/// l-th matrix power of the one-step transfer matrix (entry = path sums over E_uv^l).
NonnegMatrix transfer_matrix_power(const GraphIFS& g, double q, double s, int l);

/// transfer_matrix_power minus, in each row u, the single designated
/// length-l path term at column t(ell_u).
NonnegMatrix pruned_transfer_matrix(const GraphIFS& g, double q, double s, int l,
                                    const std::vector<Path>& ell_paths);

/// Unique s with spectral radius of the transfer matrix equal to 1;
/// rho is strictly decreasing in s.
double spectrum_exponent(const GraphIFS& g, double q);

/// Unique s with rho(pruned transfer matrix) = 1. Throws NotIrreducible
/// when the pruned support is not strongly connected (retry with larger l).
double overlap_exponent(const GraphIFS& g, double q, int l, const std::vector<Path>& ell_paths);

/// Similarity dimension: spectrum exponent at q = 0 (entries sum r^s).
double hausdorff_dimension(const GraphIFS& g);

}  // namespace gifs
