#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>

namespace hsis {

/// Two-profile clique of 2N nodes: N nodes per profile with rates in (0,1].
struct CliqueSystem {
    double n;  // nodes per profile
    double beta_a, delta_a;
    double beta_b, delta_b;

    CliqueSystem(double n_, double beta_a_, double delta_a_, double beta_b_, double delta_b_);
};

/// Infected counts per profile; real-valued in the ODE setting, in [0, N].
struct CliqueState {
    double infected_a;
    double infected_b;
};

struct Matrix2 {
    double a11, a12, a21, a22;

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
};

/// Eigenvalues of a 2x2 Jacobian with the quadratic's discriminant.
struct EigenPair2 {
    std::complex<double> lambda1;  // larger real part first
    std::complex<double> lambda2;
    double discriminant;

    double max_real() const { return std::max(lambda1.real(), lambda2.real()); }
};

struct StabilityVerdict {
    std::string fixed_point;  // label, e.g. "zero", "full_infection", "mixed"
    CliqueState at;
    EigenPair2 eigenvalues;
    bool stable;              // max real part < 0; false when non-hyperbolic
    bool non_hyperbolic;      // an eigenvalue real part within 1e-12 of zero
    std::optional<double> condition_value;  // scalar condition where one exists
};

/// Time derivatives (dI_A/dt, dI_B/dt) of the two-profile clique system.
std::pair<double, double> clique_rhs(const CliqueSystem& sys, const CliqueState& st);

/// Jacobian of clique_rhs at a state.
Matrix2 clique_jacobian(const CliqueSystem& sys, const CliqueState& st);

/// Eigenvalues of a 2x2 matrix by the quadratic formula, computing the
/// larger-magnitude root first and the other from the product.
EigenPair2 eigenvalues_2x2(const Matrix2& m);

/// Stability of the extinction fixed point (0,0). The scalar condition value
/// is N(delta_a*beta_b + delta_b*beta_a)/(delta_a*delta_b); stable iff < 1.
StabilityVerdict analyze_zero(const CliqueSystem& sys);

/// Discriminant of the characteristic quadratic at (0,0), in the rearranged
/// form that is manifestly positive for valid rates.
double discriminant_zero_fp(const CliqueSystem& sys);

/// Infection rates that place a fixed point at (cN, cN), 1/2 < c < 1:
/// beta = delta / (2N(1-c)) per profile. Throws if c is out of range or a
/// derived rate leaves (0,1].
std::pair<double, double> derive_rates_full_infection(double n, double c, double delta_a,
                                                      double delta_b);

/// Infection rates that place a fixed point at ((1-c)N, cN), 0 < c < 1:
/// beta_a = (delta_a/N)(1-c)/c, beta_b = (delta_b/N)c/(1-c). Throws with the
/// feasible c range if a derived rate leaves (0,1].
std::pair<double, double> derive_rates_mixed(double n, double c, double delta_a, double delta_b);

/// Stability verdict at an arbitrary fixed point. Requires the state to be a
/// fixed point up to `tol` (default 1e-8 * N); throws naming the residual
/// otherwise.
StabilityVerdict analyze_at(const CliqueSystem& sys, const CliqueState& st,
                            const std::string& label = "custom", double tol = -1.0);

}  // namespace hsis
