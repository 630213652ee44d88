#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsis/graph.hpp"
#include "hsis/profile.hpp"
#include "hsis/spectral.hpp"

namespace hsis {

/// Per-node infection probabilities, the state of the mean-field system.
struct MeanFieldState {
    std::vector<double> p;
};

/// dp_i/dt = -delta_i p_i + beta_i (1 - p_i) sum_{j in adj(i)} p_j
std::vector<double> mf_rhs(const Graph& g, const SystemMatrices& sm,
                           const std::vector<double>& p);

/// inf-norm of p - Delta^-1 B Q A p, the fixed-point residual.
double mf_residual(const Graph& g, const SystemMatrices& sm, const std::vector<double>& p);

struct IntegrateOptions {
    double t_end = 100.0;
    double dt = 0.0;                   // 0 -> min(0.05, 0.1/max(delta_max, beta_max*d_max))
    std::size_t record_every = 10;     // steps between recorded states / steady checks
    bool stop_when_steady = true;
    double steady_rhs_tol = 1e-8;      // steady when ||rhs||_inf stays below this
    int steady_checkpoints = 10;       // ... for this many consecutive checkpoints
    bool record_states = true;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;  // recorded states, clamped to [0,1]
    std::vector<double> final_state;
    double t_final = 0.0;
    std::size_t steps = 0;
    std::size_t clamp_events = 0;
    bool steady = false;
};

/// Explicit RK4 on the mean-field system. States are clamped to [0,1] after
/// each step (events counted; zero clamps expected at the default dt).
/// Throws if the state goes non-finite, naming the step.
Trajectory mf_integrate(const Graph& g, const SystemMatrices& sm, std::vector<double> p0,
                        const IntegrateOptions& opt);

/// Damped per-node self-consistent iteration for fixed points of the
/// mean-field system: p_i <- s_i / (delta_i/beta_i + s_i), s = A p, mixed
/// with the previous iterate. Returns p with mf_residual <= tol; throws a
/// ConvergenceError carrying the last residual otherwise.
std::vector<double> mf_fixed_point(const Graph& g, const SystemMatrices& sm,
                                   std::vector<double> p0, double tol = 1e-10,
                                   std::size_t max_iter = 200000, double damping = 0.5);

/// Jacobian of the mean-field system at p, as a matrix-vector operator:
/// J(p) = -I + Delta^-1 B (I - diag(p)) A - Delta^-1 B diag(Ap).
class MfJacobian {
public:
    MfJacobian(const Graph& g, const SystemMatrices& sm, std::vector<double> p);

    std::size_t dim() const { return p_.size(); }
    void apply(const std::vector<double>& v, std::vector<double>& out) const;

    /// Dense row-major matrix; only for dim() <= 64.
    std::vector<double> dense() const;

    /// Splits J as (nonnegative part, positive diagonal d) with J = N - diag(d),
    /// for spectral_abscissa_metzler.
    const SparseNonneg& nonneg_part() const { return nonneg_; }
    const std::vector<double>& diag_part() const { return diag_; }

private:
    const Graph& g_;
    std::vector<double> p_;
    std::vector<double> scale_;  // beta_i / delta_i
    std::vector<double> ap_;     // A p
    SparseNonneg nonneg_;        // Delta^-1 B Q A (zero diagonal)
    std::vector<double> diag_;   // 1 + (beta_i/delta_i) (Ap)_i
};

/// Delta^-1 B A as a sparse nonnegative matrix.
SparseNonneg delta_inv_b_a(const Graph& g, const SystemMatrices& sm);

struct ZeroStabilityReport {
    double rho = 0.0;               // spectral radius of Delta^-1 B A
    bool stable = false;            // rho < 1
    std::string verdict;            // "stable" | "unstable" | "critical"
    double metzler_abscissa = 0.0;  // max Re eig of (B A - Delta), sign cross-check
    bool restricted_to_component = false;
    std::size_t component_size = 0;
    std::size_t iterations = 0;
};

/// Stability of the all-zeros fixed point. On a disconnected graph the
/// spectral claim is restricted to the largest connected component and
/// flagged. |rho - 1| < 1e-6 is reported as "critical" (not hyperbolic).
ZeroStabilityReport zero_stability(const Graph& g, const SystemMatrices& sm, double tol = 1e-10);

/// The nontrivial fixed point above threshold, located by the damped
/// iteration seeded from the Perron direction of Delta^-1 B A. Requires a
/// connected graph and rho > 1 (throws "zero is the attractor" below).
std::vector<double> pf_fixed_point(const Graph& g, const SystemMatrices& sm, double tol = 1e-10);

/// Probability range [a,b] (and separation factor x for the mixed regime).
struct BoundsQuery {
    double a = 0.0;
    double b = 0.0;
    std::optional<double> x;
};

struct BoundsWindow {
    std::string name;   // which constraint the window belongs to
    double lower = 0.0;
    double upper = 0.0;
};

struct BoundsReport {
    std::vector<BoundsWindow> windows;
    std::vector<std::uint8_t> node_pass;
    bool all_pass = false;
};

/// Two-profile flood-regime degree windows: for every node of profile P,
/// a/(b(1-a)) < (beta_P/delta_P) d(i) < b/(a(1-b)). Windows are reported on
/// d(i) per profile.
BoundsReport flood_bounds(const DegreeProfile& dp, const ProfileParams& params,
                          const BoundsQuery& q);

/// Two-profile mixed-regime windows on d_A(i)/x + d_B(i); every node must
/// satisfy both the profile-A and profile-B constraint. Requires x > b.
BoundsReport mixed_bounds(const DegreeProfile& dp, const ProfileParams& params,
                          const BoundsQuery& q);

}  // namespace hsis
