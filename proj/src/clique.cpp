#include "hsis/clique.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hsis {

namespace {

constexpr double kHyperbolicEps = 1e-12;

void check_rate(double v, const char* name) {
    if (!(v > 0.0 && v <= 1.0)) {
        std::ostringstream msg;
        msg << "CliqueSystem: " << name << " must lie in (0,1], got " << v;
        throw std::invalid_argument(msg.str());
    }
}

StabilityVerdict make_verdict(std::string label, const CliqueState& st, const EigenPair2& eig,
                              std::optional<double> condition) {
    StabilityVerdict v;
    v.fixed_point = std::move(label);
    v.at = st;
    v.eigenvalues = eig;
    v.non_hyperbolic = std::abs(eig.lambda1.real()) < kHyperbolicEps ||
                       std::abs(eig.lambda2.real()) < kHyperbolicEps;
    v.stable = !v.non_hyperbolic && eig.max_real() < 0.0;
    v.condition_value = condition;
    return v;
}

}  // namespace

CliqueSystem::CliqueSystem(double n_, double beta_a_, double delta_a_, double beta_b_,
                           double delta_b_)
    : n(n_), beta_a(beta_a_), delta_a(delta_a_), beta_b(beta_b_), delta_b(delta_b_) {
    if (!(n >= 1.0)) throw std::invalid_argument("CliqueSystem: need N >= 1");
    check_rate(beta_a, "beta_a");
    check_rate(delta_a, "delta_a");
    check_rate(beta_b, "beta_b");
    check_rate(delta_b, "delta_b");
}

std::pair<double, double> clique_rhs(const CliqueSystem& sys, const CliqueState& st) {
    const double total = st.infected_a + st.infected_b;
    double da = sys.beta_a * (sys.n - st.infected_a) * total - sys.delta_a * st.infected_a;
    double db = sys.beta_b * (sys.n - st.infected_b) * total - sys.delta_b * st.infected_b;
    return {da, db};
}

Matrix2 clique_jacobian(const CliqueSystem& sys, const CliqueState& st) {
    const double ia = st.infected_a, ib = st.infected_b;
    return {sys.beta_a * (sys.n - 2.0 * ia - ib) - sys.delta_a,
            sys.beta_a * (sys.n - ia),
            sys.beta_b * (sys.n - ib),
            sys.beta_b * (sys.n - 2.0 * ib - ia) - sys.delta_b};
}

EigenPair2 eigenvalues_2x2(const Matrix2& m) {
    const double tr = m.trace();
    const double det = m.det();
    const double disc = tr * tr - 4.0 * det;
    EigenPair2 out;
    out.discriminant = disc;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        // root with |.| maximal first; the companion root from the product
        double big = (tr >= 0.0) ? 0.5 * (tr + s) : 0.5 * (tr - s);
        double other = (big != 0.0) ? det / big : 0.0;
        out.lambda1 = {std::max(big, other), 0.0};
        out.lambda2 = {std::min(big, other), 0.0};
    } else {
        const double im = 0.5 * std::sqrt(-disc);
        out.lambda1 = {0.5 * tr, im};
        out.lambda2 = {0.5 * tr, -im};
    }
    return out;
}

double discriminant_zero_fp(const CliqueSystem& sys) {
    // rearranged as a square plus a nonnegative term, so positivity is
    // explicit for valid rates
    const double bsum = sys.n * (sys.beta_a + sys.beta_b);
    if (sys.delta_b >= sys.delta_a) {
        const double gap = sys.delta_b - sys.delta_a;
        return (gap - bsum) * (gap - bsum) + 4.0 * sys.n * sys.beta_a * gap;
    }
    const double gap = sys.delta_a - sys.delta_b;
    return (gap - bsum) * (gap - bsum) + 4.0 * sys.n * sys.beta_b * gap;
}

StabilityVerdict analyze_zero(const CliqueSystem& sys) {
    const CliqueState origin{0.0, 0.0};
    const double tr = sys.n * (sys.beta_a + sys.beta_b) - (sys.delta_a + sys.delta_b);
    const double det = sys.delta_a * sys.delta_b -
                       sys.n * (sys.delta_b * sys.beta_a + sys.delta_a * sys.beta_b);
    const double disc = discriminant_zero_fp(sys);

    EigenPair2 eig;
    eig.discriminant = disc;
    const double s = std::sqrt(disc);  // disc > 0 for valid rates, roots real
    double big = (tr >= 0.0) ? 0.5 * (tr + s) : 0.5 * (tr - s);
    double other = det / big;
    eig.lambda1 = {std::max(big, other), 0.0};
    eig.lambda2 = {std::min(big, other), 0.0};

    const double condition =
        sys.n * (sys.delta_a * sys.beta_b + sys.delta_b * sys.beta_a) / (sys.delta_a * sys.delta_b);
    return make_verdict("zero", origin, eig, condition);
}

std::pair<double, double> derive_rates_full_infection(double n, double c, double delta_a,
                                                      double delta_b) {
    if (!(c > 0.5 && c < 1.0))
        throw std::invalid_argument("derive_rates_full_infection: need 1/2 < c < 1");
    const double beta_a = delta_a / (2.0 * n * (1.0 - c));
    const double beta_b = delta_b / (2.0 * n * (1.0 - c));
    if (!(beta_a > 0.0 && beta_a <= 1.0) || !(beta_b > 0.0 && beta_b <= 1.0)) {
        std::ostringstream msg;
        msg << "derive_rates_full_infection: derived rates (" << beta_a << ", " << beta_b
            << ") leave (0,1]; need c < (2N-delta)/(2N) for both profiles";
        throw std::invalid_argument(msg.str());
    }
    return {beta_a, beta_b};
}

std::pair<double, double> derive_rates_mixed(double n, double c, double delta_a, double delta_b) {
    if (!(c > 0.0 && c < 1.0))
        throw std::invalid_argument("derive_rates_mixed: need 0 < c < 1");
    const double beta_a = (delta_a / n) * (1.0 - c) / c;
    const double beta_b = (delta_b / n) * c / (1.0 - c);
    if (!(beta_a > 0.0 && beta_a <= 1.0) || !(beta_b > 0.0 && beta_b <= 1.0)) {
        // feasible range: beta_a <= 1 needs c >= delta_a/(N+delta_a),
        //                 beta_b <= 1 needs c <= N/(N+delta_b)
        std::ostringstream msg;
        msg << "derive_rates_mixed: derived rates (" << beta_a << ", " << beta_b
            << ") leave (0,1]; feasible c range is [" << delta_a / (n + delta_a) << ", "
            << n / (n + delta_b) << "]";
        throw std::invalid_argument(msg.str());
    }
    return {beta_a, beta_b};
}

StabilityVerdict analyze_at(const CliqueSystem& sys, const CliqueState& st,
                            const std::string& label, double tol) {
    if (tol < 0.0) tol = 1e-8 * sys.n;  // rhs terms scale quadratically in N
    auto [da, db] = clique_rhs(sys, st);
    const double residual = std::max(std::abs(da), std::abs(db));
    if (residual > tol) {
        std::ostringstream msg;
        msg << "analyze_at: state (" << st.infected_a << ", " << st.infected_b
            << ") is not a fixed point: residual " << residual << " > " << tol;
        throw std::invalid_argument(msg.str());
    }
    return make_verdict(label, st, eigenvalues_2x2(clique_jacobian(sys, st)), std::nullopt);
}

}  // namespace hsis
