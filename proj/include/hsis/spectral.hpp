#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "hsis/graph.hpp"

namespace hsis {

/// Sparse nonnegative matrix in CSR form. All stored values are >= 0,
/// enforced at construction.
class SparseNonneg {
public:
    SparseNonneg() = default;

    /// Builds from (row, col, value) triplets; duplicates are summed.
    static SparseNonneg from_triplets(std::size_t n,
                                      std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triplets);

    /// Adjacency of g with row i scaled by row_scale[i] (entries row_scale[i] * A_ij).
    static SparseNonneg scaled_adjacency(const Graph& g, const std::vector<double>& row_scale);

    std::size_t dim() const { return n_; }
    double max_entry() const;

    /// out = M * in (row order fixed, deterministic reduction).
    void apply(const std::vector<double>& in, std::vector<double>& out) const;

    /// Copy with `values[i]` added to diagonal entry (i,i); the result must
    /// stay nonnegative.
    SparseNonneg with_added_diagonal(const std::vector<double>& values) const;

    /// Copy with every entry multiplied by factor >= 0.
    SparseNonneg scaled(double factor) const;

    std::size_t row_begin(std::size_t i) const { return row_ptr_[i]; }
    std::size_t row_end(std::size_t i) const { return row_ptr_[i + 1]; }
    std::uint32_t col(std::size_t idx) const { return col_[idx]; }
    double value(std::size_t idx) const { return val_[idx]; }

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::uint32_t> col_;
    std::vector<double> val_;
};

struct SpectralResult {
    double rho = 0.0;                 // dominant eigenvalue estimate
    std::vector<double> vector;       // nonnegative, L1-normalized
    std::size_t iterations = 0;
    double residual = 0.0;            // ||M v - rho v||_inf at the returned pair
    bool irreducible = true;
};

/// Raised when power iteration hits max_iter; carries the last estimate.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double estimate_, double residual_,
                     std::size_t iterations_)
        : std::runtime_error(what), estimate(estimate_), residual(residual_),
          iterations(iterations_) {}
    double estimate;
    double residual;
    std::size_t iterations;
};

/// Dominant eigenvalue and Perron vector by damped power iteration from the
/// uniform positive vector. The matrix is normalized by its max entry so the
/// stopping rule (successive Rayleigh quotients differing by < tol on the
/// normalized scale) is invariant under scalar scaling. Averaging successive
/// iterates damps the period-2 oscillation of bipartite-like matrices.
/// max_iter = 0 means the default 100 n + 1000.
SpectralResult spectral_radius(const SparseNonneg& m, double tol = 1e-10,
                               std::size_t max_iter = 0);

/// Max real part of eigenvalues of (m - diag(d)) for positive d, computed as
/// spectral_radius(m - diag(d) + shift*I) - shift with shift = max(d) unless
/// a larger one is given (the shifted matrix must be nonnegative).
double spectral_abscissa_metzler(const SparseNonneg& m, const std::vector<double>& d,
                                 double tol = 1e-10, std::size_t max_iter = 0,
                                 double shift = 0.0);

/// True iff the directed graph of nonzero entries is strongly connected.
bool is_irreducible(const SparseNonneg& m);

}  // namespace hsis
