#include <doctest.h>

#include <cmath>

#include "hsis/graph.hpp"
#include "hsis/rng.hpp"
#include "hsis/spectral.hpp"
#include "oracles.hpp"

using namespace hsis;

namespace {

SparseNonneg adjacency(const Graph& g, double scale = 1.0) {
    return SparseNonneg::scaled_adjacency(g, std::vector<double>(g.node_count(), scale));
}

std::vector<double> dense_of(const SparseNonneg& m) {
    std::vector<double> d(m.dim() * m.dim(), 0.0);
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t idx = m.row_begin(i); idx < m.row_end(i); ++idx)
            d[i * m.dim() + m.col(idx)] += m.value(idx);
    return d;
}

}  // namespace

TEST_CASE("spectral radius on tiny instances with known spectra") {
    // K2 scaled by 0.5: eigenvalues +-0.5
    auto k2 = adjacency(gen_clique(2), 0.5);
    auto r = spectral_radius(k2);
    CHECK(r.rho == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.vector[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(r.vector[1] == doctest::Approx(0.5).epsilon(1e-10));

    // triangle: largest eigenvalue 2
    auto tri = adjacency(gen_clique(3));
    CHECK(spectral_radius(tri).rho == doctest::Approx(2.0).epsilon(1e-12));

    // zero matrix: rho 0, immediately converged
    auto zero = SparseNonneg::from_triplets(4, {});
    auto rz = spectral_radius(zero);
    CHECK(rz.rho == 0.0);
    CHECK(rz.iterations == 0);
}

TEST_CASE("spectral result invariants hold") {
    hsis::rng::Engine eng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = oracles::random_connected_graph(12, 0.3, eng);
        auto m = adjacency(g);
        auto r = spectral_radius(m);

        double l1 = 0.0;
        for (double v : r.vector) {
            CHECK(v >= 0.0);
            l1 += v;
        }
        CHECK(l1 == doctest::Approx(1.0).epsilon(1e-12));

        std::vector<double> mv;
        m.apply(r.vector, mv);
        for (std::size_t i = 0; i < mv.size(); ++i)
            CHECK(std::abs(mv[i] - r.rho * r.vector[i]) <= r.residual + 1e-15);
        CHECK(r.irreducible);
    }
}

TEST_CASE("spectral radius matches the dense symmetric oracle") {
    hsis::rng::Engine eng(515);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 2 + eng.next() % 5;  // n <= 6
        std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> trip;
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = i; j < n; ++j) {
                if (eng.next_u01() < 0.4) continue;
                double v = eng.next_u01() * 3.0;
                trip.emplace_back(i, j, v);
                if (i != j) trip.emplace_back(j, i, v);
            }
        auto m = SparseNonneg::from_triplets(n, std::move(trip));
        auto eig = oracles::jacobi_eigenvalues(dense_of(m), n);
        double want = 0.0;
        for (double e : eig) want = std::max(want, std::abs(e));
        auto r = spectral_radius(m, 1e-12);
        CHECK(std::abs(r.rho - want) < 1e-8 * std::max(1.0, want));
    }
}

TEST_CASE("bipartite-like period-2 spectra are handled") {
    // path 0-1-2: eigenvalues -sqrt(2), 0, sqrt(2)
    Graph path = Graph::from_edges(3, {{0, 1}, {1, 2}});
    auto r = spectral_radius(adjacency(path));
    CHECK(r.rho == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

    // C4 cycle: eigenvalues 2, 0, 0, -2
    Graph c4 = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    CHECK(spectral_radius(adjacency(c4)).rho == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("irreducibility detection") {
    CHECK(is_irreducible(adjacency(gen_clique(3))));
    CHECK(is_irreducible(adjacency(Graph::from_edges(3, {{0, 1}, {1, 2}}))));

    // block diagonal of two K2s
    Graph two = Graph::from_edges(4, {{0, 1}, {2, 3}});
    CHECK(!is_irreducible(adjacency(two)));

    // strictly upper triangular is reducible
    auto tri = SparseNonneg::from_triplets(2, {{0, 1, 1.0}});
    CHECK(!is_irreducible(tri));
    auto r = spectral_radius(tri);  // still returns an estimate
    CHECK(!r.irreducible);
    CHECK(r.rho == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("metzler abscissa on hand-checked instances") {
    // M = 0: abscissa is -min(delta)
    auto zero = SparseNonneg::from_triplets(3, {});
    CHECK(spectral_abscissa_metzler(zero, {0.6, 0.2, 0.9}) == doctest::Approx(-0.2).epsilon(1e-10));

    // K2 * 0.3 with D = 0.6 I: eigenvalues -0.3 and -0.9
    auto k2 = adjacency(gen_clique(2), 0.3);
    CHECK(spectral_abscissa_metzler(k2, {0.6, 0.6}) == doctest::Approx(-0.3).epsilon(1e-10));
}

TEST_CASE("metzler abscissa matches characteristic-polynomial roots on random 4x4") {
    hsis::rng::Engine eng(808);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> trip;
        for (std::uint32_t i = 0; i < 4; ++i)
            for (std::uint32_t j = 0; j < 4; ++j) {
                if (i == j || eng.next_u01() < 0.3) continue;
                trip.emplace_back(i, j, eng.next_u01() * 2.0);
            }
        auto m = SparseNonneg::from_triplets(4, std::move(trip));
        std::vector<double> d(4);
        for (auto& x : d) x = 0.1 + eng.next_u01();

        auto dense = dense_of(m);
        for (std::size_t i = 0; i < 4; ++i) dense[i * 4 + i] -= d[i];
        double want = oracles::max_real_part(oracles::dense_eigenvalues(dense, 4));

        double got = spectral_abscissa_metzler(m, d, 1e-12);
        CHECK(std::abs(got - want) < 1e-7 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("metzler abscissa is invariant under doubling the shift") {
    hsis::rng::Engine eng(909);
    Graph g = oracles::random_connected_graph(10, 0.3, eng);
    auto m = adjacency(g, 0.25);
    std::vector<double> d(10);
    for (auto& x : d) x = 0.2 + eng.next_u01();
    double dmax = *std::max_element(d.begin(), d.end());
    double base = spectral_abscissa_metzler(m, d);
    double doubled = spectral_abscissa_metzler(m, d, 1e-10, 0, 2.0 * dmax);
    CHECK(std::abs(base - doubled) < 1e-8);
}

TEST_CASE("abscissa is monotone in the nonnegative part") {
    hsis::rng::Engine eng(111);
    Graph g = oracles::random_connected_graph(8, 0.4, eng);
    std::vector<double> d(8, 0.7);
    for (double alpha : {1.5, 2.0, 4.0}) {
        double lo = spectral_abscissa_metzler(adjacency(g, 0.1), d);
        double hi = spectral_abscissa_metzler(adjacency(g, 0.1 * alpha), d);
        CHECK(hi >= lo - 1e-10);
    }
}

TEST_CASE("power iteration reports non-convergence with its last estimate") {
    // a single iteration can never satisfy the successive-quotient test
    Graph path = Graph::from_edges(3, {{0, 1}, {1, 2}});
    try {
        spectral_radius(adjacency(path), 1e-10, 1);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.iterations == 1);
        CHECK(e.estimate > 0.0);
    }
}
