// Test-only numerical oracles, independent of the library implementation:
// dense symmetric eigenvalues by Jacobi rotations, characteristic-polynomial
// roots by Faddeev-LeVerrier + Durand-Kerner, and small helpers.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "hsis/graph.hpp"
#include "hsis/rng.hpp"

namespace oracles {

// All eigenvalues of a dense symmetric matrix (row-major n x n) by cyclic
// Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(at(p, q)) < 1e-300) continue;
                double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    double aip = at(i, p), aiq = at(i, q);
                    at(i, p) = c * aip - s * aiq;
                    at(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double api = at(p, i), aqi = at(q, i);
                    at(p, i) = c * api - s * aqi;
                    at(q, i) = s * api + c * aqi;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
    return eig;
}

// Monic characteristic polynomial coefficients of a dense matrix (row-major)
// by the Faddeev-LeVerrier recurrence: coeffs[i] multiplies lambda^(n-1-i),
// i.e. p(x) = x^n + coeffs[0] x^(n-1) + ... + coeffs[n-1].
inline std::vector<double> char_poly(const std::vector<double>& m, std::size_t n) {
    std::vector<double> mk(m);  // M_1 = M
    std::vector<double> coeffs(n);
    std::vector<double> next(n * n);
    for (std::size_t k = 1; k <= n; ++k) {
        double tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) tr += mk[i * n + i];
        double c = -tr / static_cast<double>(k);
        coeffs[k - 1] = c;
        if (k == n) break;
        // M_{k+1} = M (M_k + c I)
        std::vector<double> shifted(mk);
        for (std::size_t i = 0; i < n; ++i) shifted[i * n + i] += c;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t l = 0; l < n; ++l) acc += m[i * n + l] * shifted[l * n + j];
                next[i * n + j] = acc;
            }
        mk = next;
    }
    return coeffs;
}

// All complex roots of the monic polynomial x^n + c[0] x^(n-1) + ... + c[n-1]
// by Durand-Kerner iteration.
inline std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs) {
    using cd = std::complex<double>;
    const std::size_t n = coeffs.size();
    auto eval = [&](cd x) {
        cd acc(1.0, 0.0);
        for (double c : coeffs) acc = acc * x + cd(c, 0.0);
        return acc;
    };
    std::vector<cd> z(n);
    cd seed(0.4, 0.9);
    cd acc(1.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        acc *= seed;
        z[i] = acc;
    }
    for (int it = 0; it < 500; ++it) {
        double moved = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cd denom(1.0, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= (z[i] - z[j]);
            cd delta = eval(z[i]) / denom;
            z[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return z;
}

// All eigenvalues of a small dense matrix via its characteristic polynomial.
inline std::vector<std::complex<double>> dense_eigenvalues(const std::vector<double>& m,
                                                           std::size_t n) {
    return poly_roots(char_poly(m, n));
}

inline double max_real_part(const std::vector<std::complex<double>>& eig) {
    double mx = -1e300;
    for (auto& e : eig) mx = std::max(mx, e.real());
    return mx;
}

inline double max_magnitude(const std::vector<std::complex<double>>& eig) {
    double mx = 0.0;
    for (auto& e : eig) mx = std::max(mx, std::abs(e));
    return mx;
}

// Connected G(n, p) instance (re-drawn until connected).
inline hsis::Graph random_connected_graph(std::size_t n, double p, hsis::rng::Engine& eng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        hsis::Graph g = hsis::gen_erdos_renyi(n, p, eng.next());
        auto comp = hsis::connected_components(g);
        bool connected = true;
        for (auto c : comp)
            if (c != 0) {
                connected = false;
                break;
            }
        if (connected && g.edge_count() > 0) return g;
    }
    throw std::runtime_error("random_connected_graph: could not draw a connected instance");
}

}  // namespace oracles
