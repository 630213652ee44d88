// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hsis/clique.hpp"
#include "hsis/graph.hpp"
#include "hsis/meanfield.hpp"
#include "hsis/profile.hpp"
#include "hsis/rng.hpp"
#include "hsis/scenarios.hpp"
#include "hsis/sim.hpp"
#include "hsis/spectral.hpp"

using namespace hsis;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double trunc1(double x) { return std::floor(x * 10.0) / 10.0; }

Graph circulant(std::size_t n, const std::vector<std::size_t>& offsets) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i)
        for (std::size_t off : offsets)
            edges.emplace_back(i, static_cast<NodeId>((i + off) % n));
    return Graph::from_edges(n, edges);
}

// ---------------------------------------------------------------- criterion 1
Outcome clique_die_out_criterion() {
    Outcome out;
    std::ostringstream d;

    CliqueSystem sys(1000, 5e-7, 0.01, 9e-7, 0.01);
    auto verdict = analyze_zero(sys);
    double cond = *verdict.condition_value;
    bool exact = std::abs(cond - 0.14) <= 1e-12 && cond < 1.0 && verdict.stable;
    d << "condition_value=" << cond;

    ScenarioOptions opt;
    auto run = run_scenario("clique-die-out", opt);
    std::size_t extinct = 0;
    for (const auto& tr : run.sim.traces)
        if (tr.absorbed_round.has_value()) ++extinct;
    d << ", extinct " << extinct << "/32";

    out.pass = exact && extinct >= 31;  // >= 95% of 32
    out.detail = d.str();
    return out;
}

// ---------------------------------------------------------------- criterion 2
Outcome single_profile_reduction() {
    Outcome out;
    rng::Engine eng(20240811);
    double worst_cond = 0.0, worst_rho = 0.0;

    for (int trial = 0; trial < 20; ++trial) {
        double n = 1.0 + std::floor(eng.next_u01() * 5000.0);
        double beta = 1e-6 + eng.next_u01() * 0.999;
        double delta = 1e-3 + eng.next_u01() * 0.998;
        CliqueSystem sys(n, beta, delta, beta, delta);
        double cond = *analyze_zero(sys).condition_value;
        double expected = 2.0 * n * beta / delta;
        worst_cond = std::max(worst_cond, std::abs(cond - expected) / expected);
    }

    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 5 + eng.next() % 16;
        Graph g = gen_erdos_renyi(n, 0.3 + eng.next_u01() * 0.4, eng.next());
        if (g.edge_count() == 0) continue;
        double beta = 0.05 + eng.next_u01() * 0.9;
        double delta = 0.05 + eng.next_u01() * 0.9;
        auto keep = largest_component(g);
        Graph giant = induced_subgraph(g, keep);
        SystemMatrices gsm;
        gsm.beta.assign(giant.node_count(), beta);
        gsm.delta.assign(giant.node_count(), delta);

        double rho = zero_stability(giant, gsm).rho;
        double rho_a = spectral_radius(SparseNonneg::scaled_adjacency(
                                           giant, std::vector<double>(giant.node_count(), 1.0)))
                           .rho;
        double expected = beta * rho_a / delta;
        worst_rho = std::max(worst_rho, std::abs(rho - expected) / std::max(1.0, expected));
    }

    std::ostringstream d;
    d << "max relative gap: condition " << worst_cond << ", spectral " << worst_rho;
    out.detail = d.str();
    out.pass = worst_cond <= 1e-12 && worst_rho <= 1e-12;
    return out;
}

// ---------------------------------------------------------------- criterion 3
Outcome discriminant_positivity() {
    Outcome out;
    rng::Engine eng(3);
    double worst = 0.0;
    bool all_positive = true;
    for (int trial = 0; trial < 10000; ++trial) {
        double n = 1.0 + std::floor(eng.next_u01() * 10000.0);
        auto rate = [&] { return 1e-7 + eng.next_u01() * (1.0 - 1e-7); };
        CliqueSystem sys(n, rate(), rate(), rate(), rate());
        double disc = discriminant_zero_fp(sys);
        if (!(disc > 0.0)) all_positive = false;
        auto j = clique_jacobian(sys, {0.0, 0.0});
        double textbook = j.trace() * j.trace() - 4.0 * j.det();
        worst = std::max(worst, std::abs(disc - textbook) /
                                    std::max(std::abs(disc), std::abs(textbook)));
    }
    std::ostringstream d;
    d << "10000 tuples, all positive=" << (all_positive ? "yes" : "no")
      << ", worst relative gap to trace^2-4det = " << worst;
    out.detail = d.str();
    out.pass = all_positive && worst <= 1e-9;
    return out;
}

// ---------------------------------------------------------------- criterion 4
Outcome fixed_point_construction() {
    Outcome out;
    rng::Engine eng(4);
    double worst_residual = 0.0;
    bool all_stable = true;
    int built = 0;
    while (built < 100) {
        double n = 2.0 + std::floor(eng.next_u01() * 1998.0);
        double delta_a = 0.01 + eng.next_u01() * 0.99;
        double delta_b = 0.01 + eng.next_u01() * 0.99;

        double c_full = 0.51 + eng.next_u01() * 0.44;
        double c_mixed = 0.05 + eng.next_u01() * 0.9;
        try {
            auto [fa, fb] = derive_rates_full_infection(n, c_full, delta_a, delta_b);
            CliqueSystem full(n, fa, delta_a, fb, delta_b);
            auto [r1, r2] = clique_rhs(full, {c_full * n, c_full * n});
            worst_residual = std::max({worst_residual, std::abs(r1), std::abs(r2)});
            auto v = analyze_at(full, {c_full * n, c_full * n}, "full_infection");
            all_stable = all_stable && v.eigenvalues.lambda1.real() < 0.0 &&
                         v.eigenvalues.lambda2.real() < 0.0;

            auto [ma, mb] = derive_rates_mixed(n, c_mixed, delta_a, delta_b);
            CliqueSystem mixed(n, ma, delta_a, mb, delta_b);
            auto [m1, m2] = clique_rhs(mixed, {(1.0 - c_mixed) * n, c_mixed * n});
            worst_residual = std::max({worst_residual, std::abs(m1), std::abs(m2)});
            auto vm = analyze_at(mixed, {(1.0 - c_mixed) * n, c_mixed * n}, "mixed");
            all_stable = all_stable && vm.eigenvalues.lambda1.real() < 0.0 &&
                         vm.eigenvalues.lambda2.real() < 0.0;
        } catch (const std::invalid_argument&) {
            continue;  // outside the feasible rate range for this draw
        }
        ++built;
    }
    std::ostringstream d;
    d << "100 constructions, worst |rhs| = " << worst_residual
      << ", all eigenvalue real parts negative = " << (all_stable ? "yes" : "no");
    out.detail = d.str();
    out.pass = worst_residual < 1e-10 && all_stable;
    return out;
}

// ---------------------------------------------------------------- criterion 5
Outcome mixed_regime_simulation() {
    Outcome out;
    ScenarioOptions opt;
    auto run = run_scenario("clique-mixed", opt);
    out.pass = run.pass;
    out.detail = run.detail;
    return out;
}

// ---------------------------------------------------------------- criterion 6
Outcome meanfield_threshold_agreement() {
    Outcome out;
    rng::Engine eng(6);
    int checked = 0, agreed = 0;
    while (checked < 50) {
        Graph g = gen_erdos_renyi(20, 0.15 + eng.next_u01() * 0.15, eng.next());
        auto comp = connected_components(g);
        bool connected = true;
        for (auto c : comp) connected = connected && c == 0;
        if (!connected) continue;

        auto pm = assign_random_split(g, 2, eng.next());
        ProfileParams params({{0.02 + eng.next_u01() * 0.3, 0.3 + eng.next_u01() * 0.7},
                              {0.02 + eng.next_u01() * 0.3, 0.3 + eng.next_u01() * 0.7}});
        auto sm = build_matrices(pm, params);
        auto rep = zero_stability(g, sm);
        if (std::abs(rep.rho - 1.0) < 0.05) continue;  // excluded boundary band

        IntegrateOptions iopt;
        iopt.t_end = 4000.0;
        iopt.record_states = false;
        auto traj = mf_integrate(g, sm, std::vector<double>(20, 0.1), iopt);
        double maxp = 0.0;
        for (double v : traj.final_state) maxp = std::max(maxp, v);
        bool extinct = maxp < 1e-6;
        if (extinct == rep.stable) ++agreed;
        ++checked;
    }
    std::ostringstream d;
    d << agreed << "/50 instances agree with the spectral verdict";
    out.detail = d.str();
    out.pass = agreed == 50;
    return out;
}

// ---------------------------------------------------------------- criterion 7
Outcome pf_fixed_point_regular() {
    Outcome out;
    struct Case {
        const char* name;
        Graph g;
    };
    std::vector<Case> cases;
    cases.push_back({"triangle", gen_clique(3)});
    cases.push_back({"C8", circulant(8, {1})});
    cases.push_back({"K6", gen_clique(6)});
    cases.push_back({"C10(1,2)", circulant(10, {1, 2})});

    double worst_entry = 0.0, worst_residual = 0.0, worst_abscissa = -1e300;
    for (auto& c : cases) {
        std::size_t k = c.g.degree(0);
        double delta = 0.3;
        double beta = 2.5 * delta / static_cast<double>(k);  // threshold ratio 2.5
        SystemMatrices sm;
        sm.beta.assign(c.g.node_count(), beta);
        sm.delta.assign(c.g.node_count(), delta);

        auto p = pf_fixed_point(c.g, sm, 1e-13);
        double want = 1.0 - delta / (beta * static_cast<double>(k));
        for (double v : p) worst_entry = std::max(worst_entry, std::abs(v - want));
        worst_residual = std::max(worst_residual, mf_residual(c.g, sm, p));

        MfJacobian jac(c.g, sm, p);
        double absc = spectral_abscissa_metzler(jac.nonneg_part(), jac.diag_part());
        worst_abscissa = std::max(worst_abscissa, absc);
    }
    std::ostringstream d;
    d << "worst entry gap " << worst_entry << ", worst residual " << worst_residual
      << ", worst jacobian abscissa " << worst_abscissa;
    out.detail = d.str();
    out.pass = worst_entry <= 1e-8 && worst_residual <= 1e-10 && worst_abscissa <= 1e-8;
    return out;
}

// ---------------------------------------------------------------- criterion 8
Outcome degree_bound_windows() {
    Outcome out;
    std::ostringstream d;

    // flood regime with rate ratios 2 and 4 on [0.6, 0.9]
    ProfileParams flood_params({{0.5, 0.25}, {0.5, 0.125}});
    Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    ProfileMap pm({0, 0, 1, 1}, 2);
    auto dp = degrees(g, pm);
    auto flood = flood_bounds(dp, flood_params, BoundsQuery{0.6, 0.9, std::nullopt});

    bool flood_ok = std::abs(flood.windows[0].upper - 7.5) <= 1e-9 &&
                    std::abs(flood.windows[1].upper - 3.75) <= 1e-9 &&
                    trunc1(flood.windows[0].lower) == 0.8 &&
                    trunc1(flood.windows[1].lower) == 0.4;
    d << "flood windows (" << flood.windows[0].lower << ", " << flood.windows[0].upper << ") ("
      << flood.windows[1].lower << ", " << flood.windows[1].upper << ")";

    // mixed regime: the resilient profile's printed bounds match under
    // truncation; the susceptible profile's published numbers are not
    // reproducible from its stated rate ratio, so the contract is our own
    // recomputation of the inequality
    ProfileParams mixed_params({{0.001, 1.0}, {1.0, 0.01}});
    auto mixed = mixed_bounds(dp, mixed_params, BoundsQuery{0.8, 0.99, 100.0});
    double lo_a = 1000.0 * 0.8 / (0.99 * (100.0 - 0.8));
    double hi_a = 1000.0 * 0.99 / (0.8 * (100.0 - 0.99));
    double lo_b = 0.01 * 0.8 / (0.99 * 0.2);
    double hi_b = 0.01 * 0.99 / (0.8 * 0.01);
    bool mixed_ok = trunc1(mixed.windows[0].lower) == 8.1 &&
                    trunc1(mixed.windows[0].upper) == 12.4 &&
                    std::abs(mixed.windows[0].lower - lo_a) <= 1e-9 * lo_a &&
                    std::abs(mixed.windows[0].upper - hi_a) <= 1e-9 * hi_a &&
                    std::abs(mixed.windows[1].lower - lo_b) <= 1e-9 * lo_b &&
                    std::abs(mixed.windows[1].upper - hi_b) <= 1e-9 * hi_b;
    d << "; mixed windows (" << mixed.windows[0].lower << ", " << mixed.windows[0].upper
      << ") (" << mixed.windows[1].lower << ", " << mixed.windows[1].upper << ")";

    out.detail = d.str();
    out.pass = flood_ok && mixed_ok;
    return out;
}

// ---------------------------------------------------------------- criterion 9
Outcome desk_scale_smoke() {
    Outcome out;
    std::ostringstream d;
    bool all = true;
    for (const char* name : {"arbitrary-die-out", "arbitrary-flood", "arbitrary-mixed",
                             "five-profile", "powerlaw"}) {
        ScenarioOptions opt;
        opt.replications = 4;
        auto run = run_scenario(name, opt);
        all = all && run.pass;
        d << run.name << "=" << (run.pass ? "ok" : "FAIL") << " ";
    }
    d << "(full-scale runs are exercised via `hetero-sis repro --full-scale`, not gated here)";
    out.detail = d.str();
    out.pass = all;
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        const char* label;
        double budget_seconds;
        std::function<Outcome()> fn;
    };
    std::vector<Criterion> criteria = {
        {"1 clique die-out condition + desk-scale extinction", 30.0, clique_die_out_criterion},
        {"2 single-profile threshold reduction", 1.0, single_profile_reduction},
        {"3 discriminant positivity", 5.0, discriminant_positivity},
        {"4 fixed-point construction from derived rates", 5.0, fixed_point_construction},
        {"5 mixed-regime simulation shape", 60.0, mixed_regime_simulation},
        {"6 mean-field zero-stability threshold agreement", 60.0, meanfield_threshold_agreement},
        {"7 PF fixed point on regular graphs", 10.0, pf_fixed_point_regular},
        {"8 degree-bound windows", 1.0, degree_bound_windows},
        {"9 desk-scale qualitative smoke checks", 120.0, desk_scale_smoke},
    };

    int failures = 0;
    for (auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.fn();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_budget = secs < c.budget_seconds;
        bool pass = outcome.pass && in_budget;
        if (!pass) ++failures;
        std::printf("criterion %-52s %s  (%.2fs, budget %.0fs)  %s\n", c.label,
                    pass ? "PASS" : "FAIL", secs, c.budget_seconds, outcome.detail.c_str());
    }
    return failures == 0 ? 0 : 1;
}
