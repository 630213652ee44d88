#include "hsis/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace hsis {

SparseNonneg SparseNonneg::from_triplets(
    std::size_t n, std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triplets) {
    std::sort(triplets.begin(), triplets.end(),
              [](const auto& a, const auto& b) {
                  return std::tie(std::get<0>(a), std::get<1>(a)) <
                         std::tie(std::get<0>(b), std::get<1>(b));
              });
    SparseNonneg m;
    m.n_ = n;
    m.row_ptr_.assign(n + 1, 0);
    std::uint32_t prev_r = ~std::uint32_t{0}, prev_c = ~std::uint32_t{0};
    for (const auto& [r, c, v] : triplets) {
        if (r >= n || c >= n)
            throw std::invalid_argument("SparseNonneg: index out of range");
        if (!m.col_.empty() && r == prev_r && c == prev_c) {
            m.val_.back() += v;  // duplicate entry, sum
        } else {
            m.col_.push_back(c);
            m.val_.push_back(v);
            ++m.row_ptr_[r + 1];
            prev_r = r;
            prev_c = c;
        }
        if (m.val_.back() < 0.0)
            throw std::invalid_argument("SparseNonneg: negative entry");
    }
    for (std::size_t i = 0; i < n; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
    return m;
}

SparseNonneg SparseNonneg::scaled_adjacency(const Graph& g, const std::vector<double>& row_scale) {
    if (row_scale.size() != g.node_count())
        throw std::invalid_argument("scaled_adjacency: scale vector size mismatch");
    SparseNonneg m;
    m.n_ = g.node_count();
    m.row_ptr_.resize(m.n_ + 1);
    m.row_ptr_[0] = 0;
    for (NodeId i = 0; i < m.n_; ++i) {
        if (row_scale[i] < 0.0)
            throw std::invalid_argument("scaled_adjacency: negative row scale");
        for (NodeId j : g.neighbors(i)) {
            m.col_.push_back(j);
            m.val_.push_back(row_scale[i]);
        }
        m.row_ptr_[i + 1] = m.col_.size();
    }
    return m;
}

double SparseNonneg::max_entry() const {
    double mx = 0.0;
    for (double v : val_) mx = std::max(mx, v);
    return mx;
}

void SparseNonneg::apply(const std::vector<double>& in, std::vector<double>& out) const {
    out.assign(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t idx = row_ptr_[i]; idx < row_ptr_[i + 1]; ++idx)
            acc += val_[idx] * in[col_[idx]];
        out[i] = acc;
    }
}

SparseNonneg SparseNonneg::with_added_diagonal(const std::vector<double>& values) const {
    if (values.size() != n_)
        throw std::invalid_argument("with_added_diagonal: size mismatch");
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triplets;
    triplets.reserve(col_.size() + n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t idx = row_ptr_[i]; idx < row_ptr_[i + 1]; ++idx)
            triplets.emplace_back(static_cast<std::uint32_t>(i), col_[idx], val_[idx]);
    for (std::size_t i = 0; i < n_; ++i)
        triplets.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i),
                              values[i]);
    return from_triplets(n_, std::move(triplets));
}

SparseNonneg SparseNonneg::scaled(double factor) const {
    if (factor < 0.0) throw std::invalid_argument("SparseNonneg::scaled: negative factor");
    SparseNonneg m = *this;
    for (double& v : m.val_) v *= factor;
    return m;
}

SpectralResult spectral_radius(const SparseNonneg& m, double tol, std::size_t max_iter) {
    const std::size_t n = m.dim();
    if (n == 0) throw std::invalid_argument("spectral_radius: empty matrix");
    if (max_iter == 0) max_iter = 100 * n + 1000;

    SpectralResult res;
    res.irreducible = is_irreducible(m);
    res.vector.assign(n, 1.0 / static_cast<double>(n));

    const double scale = m.max_entry();
    if (scale == 0.0) {
        res.rho = 0.0;
        res.residual = 0.0;
        res.iterations = 0;
        return res;
    }
    const SparseNonneg ms = m.scaled(1.0 / scale);

    std::vector<double>& v = res.vector;
    std::vector<double> w(n);
    double rayleigh_prev = std::numeric_limits<double>::infinity();
    double rayleigh = 0.0;
    bool converged = false;
    std::size_t it = 0;

    for (; it < max_iter; ++it) {
        ms.apply(v, w);
        double vw = 0.0, vv = 0.0, wsum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            vw += v[i] * w[i];
            vv += v[i] * v[i];
            wsum += w[i];
        }
        rayleigh = vw / vv;
        if (wsum == 0.0) {  // image vanished: dominant eigenvalue is 0
            rayleigh = 0.0;
            converged = true;
            ++it;
            break;
        }
        if (std::abs(rayleigh - rayleigh_prev) < tol) {
            converged = true;
            ++it;
            break;
        }
        rayleigh_prev = rayleigh;
        // average with the previous iterate to damp period-2 oscillation
        double norm1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = 0.5 * (v[i] + w[i] / wsum);
            norm1 += v[i];
        }
        for (std::size_t i = 0; i < n; ++i) v[i] /= norm1;
    }

    res.rho = rayleigh * scale;
    res.iterations = it;

    // residual on the original scale at the returned pair
    m.apply(v, w);
    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        resid = std::max(resid, std::abs(w[i] - res.rho * v[i]));
    res.residual = resid;

    if (!converged) {
        std::ostringstream msg;
        msg << "spectral_radius: no convergence after " << max_iter
            << " iterations (estimate " << res.rho << ", residual " << resid << ")";
        throw ConvergenceError(msg.str(), res.rho, resid, it);
    }
    return res;
}

double spectral_abscissa_metzler(const SparseNonneg& m, const std::vector<double>& d, double tol,
                                 std::size_t max_iter, double shift) {
    if (d.size() != m.dim())
        throw std::invalid_argument("spectral_abscissa_metzler: diagonal size mismatch");
    double dmax = 0.0;
    for (double x : d) {
        if (!(x > 0.0))
            throw std::invalid_argument("spectral_abscissa_metzler: diagonal must be positive");
        dmax = std::max(dmax, x);
    }
    double s = std::max(shift, dmax);
    std::vector<double> diag_add(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) diag_add[i] = s - d[i];
    SparseNonneg shifted = m.with_added_diagonal(diag_add);
    return spectral_radius(shifted, tol, max_iter).rho - s;
}

bool is_irreducible(const SparseNonneg& m) {
    const std::size_t n = m.dim();
    if (n == 0) return false;
    if (n == 1) return true;

    // strong connectivity: BFS over the pattern and over its transpose
    std::vector<std::vector<std::uint32_t>> rev(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t idx = m.row_begin(i); idx < m.row_end(i); ++idx)
            if (m.value(idx) != 0.0) rev[m.col(idx)].push_back(static_cast<std::uint32_t>(i));

    auto reaches_all = [&](bool forward) {
        std::vector<char> seen(n, 0);
        std::vector<std::uint32_t> stack{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            std::uint32_t vtx = stack.back();
            stack.pop_back();
            if (forward) {
                for (std::size_t idx = m.row_begin(vtx); idx < m.row_end(vtx); ++idx) {
                    std::uint32_t w = m.col(idx);
                    if (m.value(idx) != 0.0 && !seen[w]) {
                        seen[w] = 1;
                        ++count;
                        stack.push_back(w);
                    }
                }
            } else {
                for (std::uint32_t w : rev[vtx]) {
                    if (!seen[w]) {
                        seen[w] = 1;
                        ++count;
                        stack.push_back(w);
                    }
                }
            }
        }
        return count == n;
    };
    return reaches_all(true) && reaches_all(false);
}

}  // namespace hsis
