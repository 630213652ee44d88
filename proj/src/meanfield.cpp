#include "hsis/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hsis {

namespace {

void check_dims(const Graph& g, const SystemMatrices& sm, const std::vector<double>& p,
                const char* where) {
    if (sm.node_count() != g.node_count() || p.size() != g.node_count()) {
        std::ostringstream msg;
        msg << where << ": dimension mismatch (graph " << g.node_count() << ", matrices "
            << sm.node_count() << ", state " << p.size() << ")";
        throw std::invalid_argument(msg.str());
    }
}

void check_probability_box(const std::vector<double>& p, const char* where) {
    for (double v : p)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument(std::string(where) + ": state entry outside [0,1]");
}

double default_dt(const Graph& g, const SystemMatrices& sm) {
    double delta_max = 0.0, beta_max = 0.0;
    for (double d : sm.delta) delta_max = std::max(delta_max, d);
    for (double b : sm.beta) beta_max = std::max(beta_max, b);
    std::size_t d_max = 0;
    for (NodeId i = 0; i < g.node_count(); ++i) d_max = std::max(d_max, g.degree(i));
    double fastest = std::max(delta_max, beta_max * static_cast<double>(d_max));
    return std::min(0.05, fastest > 0.0 ? 0.1 / fastest : 0.05);
}

}  // namespace

std::vector<double> mf_rhs(const Graph& g, const SystemMatrices& sm,
                           const std::vector<double>& p) {
    check_dims(g, sm, p, "mf_rhs");
    std::vector<double> out(p.size());
    for (NodeId i = 0; i < g.node_count(); ++i) {
        double s = 0.0;
        for (NodeId j : g.neighbors(i)) s += p[j];
        out[i] = -sm.delta[i] * p[i] + sm.beta[i] * (1.0 - p[i]) * s;
    }
    return out;
}

double mf_residual(const Graph& g, const SystemMatrices& sm, const std::vector<double>& p) {
    check_dims(g, sm, p, "mf_residual");
    double r = 0.0;
    for (NodeId i = 0; i < g.node_count(); ++i) {
        double s = 0.0;
        for (NodeId j : g.neighbors(i)) s += p[j];
        double mapped = (sm.beta[i] / sm.delta[i]) * (1.0 - p[i]) * s;
        r = std::max(r, std::abs(p[i] - mapped));
    }
    return r;
}

Trajectory mf_integrate(const Graph& g, const SystemMatrices& sm, std::vector<double> p0,
                        const IntegrateOptions& opt) {
    check_dims(g, sm, p0, "mf_integrate");
    check_probability_box(p0, "mf_integrate");
    const double dt = opt.dt > 0.0 ? opt.dt : default_dt(g, sm);
    const std::size_t n = p0.size();

    Trajectory traj;
    std::vector<double> p = std::move(p0);
    std::vector<double> k1, k2, k3, k4, tmp(n);

    auto record = [&](double t) {
        traj.times.push_back(t);
        if (opt.record_states) traj.states.push_back(p);
    };

    record(0.0);
    double t = 0.0;
    int steady_streak = 0;
    std::size_t step = 0;
    while (t < opt.t_end - 1e-12 * std::max(1.0, opt.t_end)) {
        double h = std::min(dt, opt.t_end - t);
        k1 = mf_rhs(g, sm, p);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * h * k1[i];
        k2 = mf_rhs(g, sm, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * h * k2[i];
        k3 = mf_rhs(g, sm, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + h * k3[i];
        k4 = mf_rhs(g, sm, tmp);

        bool clamped = false;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
            if (!std::isfinite(p[i])) {
                std::ostringstream msg;
                msg << "mf_integrate: non-finite state at step " << step << " (t=" << t + h << ")";
                throw std::runtime_error(msg.str());
            }
            if (p[i] < 0.0) {
                p[i] = 0.0;
                clamped = true;
            } else if (p[i] > 1.0) {
                p[i] = 1.0;
                clamped = true;
            }
        }
        if (clamped) ++traj.clamp_events;
        t += h;
        ++step;

        if (step % opt.record_every == 0 || t >= opt.t_end - 1e-12) {
            record(t);
            double rhs_norm = 0.0;
            for (double v : mf_rhs(g, sm, p)) rhs_norm = std::max(rhs_norm, std::abs(v));
            steady_streak = rhs_norm < opt.steady_rhs_tol ? steady_streak + 1 : 0;
            if (opt.stop_when_steady && steady_streak >= opt.steady_checkpoints) {
                traj.steady = true;
                break;
            }
        }
    }
    traj.final_state = p;
    traj.t_final = t;
    traj.steps = step;
    return traj;
}

std::vector<double> mf_fixed_point(const Graph& g, const SystemMatrices& sm,
                                   std::vector<double> p0, double tol, std::size_t max_iter,
                                   double damping) {
    check_dims(g, sm, p0, "mf_fixed_point");
    for (double v : p0)
        if (!(v >= 0.0 && v < 1.0))
            throw std::invalid_argument("mf_fixed_point: p0 entries must lie in [0,1)");

    std::vector<double> p = std::move(p0);
    std::vector<double> next(p.size());
    double residual = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        residual = 0.0;
        for (NodeId i = 0; i < g.node_count(); ++i) {
            double s = 0.0;
            for (NodeId j : g.neighbors(i)) s += p[j];
            double target = s / (sm.delta[i] / sm.beta[i] + s);
            residual = std::max(residual, std::abs(p[i] - (sm.beta[i] / sm.delta[i]) *
                                                              (1.0 - p[i]) * s));
            next[i] = (1.0 - damping) * target + damping * p[i];
        }
        if (residual <= tol) return p;
        p.swap(next);
    }
    std::ostringstream msg;
    msg << "mf_fixed_point: no convergence after " << max_iter << " iterations (residual "
        << residual << ")";
    throw ConvergenceError(msg.str(), 0.0, residual, max_iter);
}

MfJacobian::MfJacobian(const Graph& g, const SystemMatrices& sm, std::vector<double> p)
    : g_(g), p_(std::move(p)) {
    check_dims(g, sm, p_, "mf_jacobian");
    check_probability_box(p_, "mf_jacobian");
    const std::size_t n = p_.size();
    scale_.resize(n);
    ap_.assign(n, 0.0);
    for (NodeId i = 0; i < n; ++i) {
        scale_[i] = sm.beta[i] / sm.delta[i];
        for (NodeId j : g.neighbors(i)) ap_[i] += p_[j];
    }
    std::vector<double> row_scale(n);
    for (std::size_t i = 0; i < n; ++i) row_scale[i] = scale_[i] * (1.0 - p_[i]);
    nonneg_ = SparseNonneg::scaled_adjacency(g, row_scale);
    diag_.resize(n);
    for (std::size_t i = 0; i < n; ++i) diag_[i] = 1.0 + scale_[i] * ap_[i];
}

void MfJacobian::apply(const std::vector<double>& v, std::vector<double>& out) const {
    if (v.size() != p_.size()) throw std::invalid_argument("MfJacobian::apply: size mismatch");
    nonneg_.apply(v, out);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] -= diag_[i] * v[i];
}

std::vector<double> MfJacobian::dense() const {
    const std::size_t n = p_.size();
    if (n > 64)
        throw std::invalid_argument("MfJacobian::dense: materialization limited to n <= 64");
    std::vector<double> m(n * n, 0.0);
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j : g_.neighbors(i)) m[i * n + j] = scale_[i] * (1.0 - p_[i]);
        m[i * n + i] -= diag_[i];
    }
    return m;
}

SparseNonneg delta_inv_b_a(const Graph& g, const SystemMatrices& sm) {
    std::vector<double> row_scale(g.node_count());
    for (NodeId i = 0; i < g.node_count(); ++i) row_scale[i] = sm.beta[i] / sm.delta[i];
    return SparseNonneg::scaled_adjacency(g, row_scale);
}

ZeroStabilityReport zero_stability(const Graph& g, const SystemMatrices& sm, double tol) {
    if (sm.node_count() != g.node_count())
        throw std::invalid_argument("zero_stability: dimension mismatch");

    ZeroStabilityReport rep;
    auto comp = connected_components(g);
    std::size_t ncomp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;

    const Graph* target = &g;
    Graph giant;
    SystemMatrices sub;
    const SystemMatrices* target_sm = &sm;
    if (ncomp > 1) {
        auto keep = largest_component(g);
        giant = induced_subgraph(g, keep);
        sub.delta.reserve(keep.size());
        sub.beta.reserve(keep.size());
        for (NodeId old_id : keep) {
            sub.delta.push_back(sm.delta[old_id]);
            sub.beta.push_back(sm.beta[old_id]);
        }
        target = &giant;
        target_sm = &sub;
        rep.restricted_to_component = true;
    }
    rep.component_size = target->node_count();

    auto spec = spectral_radius(delta_inv_b_a(*target, *target_sm), tol);
    rep.rho = spec.rho;
    rep.iterations = spec.iterations;
    rep.stable = rep.rho < 1.0;
    if (std::abs(rep.rho - 1.0) < 1e-6)
        rep.verdict = "critical";
    else
        rep.verdict = rep.stable ? "stable" : "unstable";

    // independent route: sign of the spectral abscissa of (B A - Delta)
    SparseNonneg ba = SparseNonneg::scaled_adjacency(*target, target_sm->beta);
    rep.metzler_abscissa = spectral_abscissa_metzler(ba, target_sm->delta, tol);
    if (rep.verdict != "critical" && (rep.metzler_abscissa < 0.0) != rep.stable) {
        std::ostringstream msg;
        msg << "zero_stability: spectral routes disagree (rho=" << rep.rho
            << ", metzler abscissa=" << rep.metzler_abscissa << ")";
        throw std::runtime_error(msg.str());
    }
    return rep;
}

std::vector<double> pf_fixed_point(const Graph& g, const SystemMatrices& sm, double tol) {
    auto comp = connected_components(g);
    if (!comp.empty() && *std::max_element(comp.begin(), comp.end()) != 0)
        throw std::invalid_argument("pf_fixed_point: graph must be connected");

    auto spec = spectral_radius(delta_inv_b_a(g, sm));
    if (spec.rho <= 1.0)
        throw std::domain_error("pf_fixed_point: system is below threshold, zero is the attractor");

    // seed from the Perron direction, scaled to a half-unit peak
    std::vector<double> p0 = spec.vector;
    double mx = *std::max_element(p0.begin(), p0.end());
    for (double& v : p0) v = 0.5 * v / mx;
    return mf_fixed_point(g, sm, std::move(p0), tol);
}

namespace {

void require_two_profiles(const DegreeProfile& dp, const ProfileParams& params,
                          const char* where) {
    if (dp.k != 2 || params.k() != 2)
        throw std::invalid_argument(std::string(where) + ": exactly two profiles required");
}

void check_range(const BoundsQuery& q, const char* where) {
    if (!(q.a > 0.0 && q.a <= q.b && q.b < 1.0))
        throw std::invalid_argument(std::string(where) + ": need 0 < a <= b < 1");
}

}  // namespace

BoundsReport flood_bounds(const DegreeProfile& dp, const ProfileParams& params,
                          const BoundsQuery& q) {
    require_two_profiles(dp, params, "flood_bounds");
    check_range(q, "flood_bounds");
    if (q.x) throw std::invalid_argument("flood_bounds: x applies to the mixed regime only");

    const double lo = q.a / (q.b * (1.0 - q.a));
    const double hi = q.b / (q.a * (1.0 - q.b));

    BoundsReport rep;
    std::vector<double> ratio(2);
    for (std::uint32_t prof = 0; prof < 2; ++prof) {
        ratio[prof] = params.rates(prof).beta / params.rates(prof).delta;
        rep.windows.push_back({prof == 0 ? "degree_window_profile_0" : "degree_window_profile_1",
                               lo / ratio[prof], hi / ratio[prof]});
    }

    const std::size_t n = dp.total.size();
    if (dp.profile.size() != n)
        throw std::invalid_argument("flood_bounds: degree profile lacks node profiles");
    rep.node_pass.resize(n);
    rep.all_pass = true;
    for (std::size_t i = 0; i < n; ++i) {
        // each node is checked against its own profile's window
        const auto& w = rep.windows[dp.profile[i]];
        const double d = dp.total[i];
        bool ok = d > w.lower && d < w.upper;
        rep.node_pass[i] = ok ? 1 : 0;
        rep.all_pass = rep.all_pass && ok;
    }
    return rep;
}

BoundsReport mixed_bounds(const DegreeProfile& dp, const ProfileParams& params,
                          const BoundsQuery& q) {
    require_two_profiles(dp, params, "mixed_bounds");
    check_range(q, "mixed_bounds");
    if (!q.x) throw std::invalid_argument("mixed_bounds: x is required");
    const double x = *q.x;
    if (!(x > 1.0)) throw std::invalid_argument("mixed_bounds: need x > 1");
    if (!(x > q.b))
        throw std::invalid_argument("mixed_bounds: need x > b (the (x-b) denominator)");

    const double inv_ratio_a = params.rates(0).delta / params.rates(0).beta;
    const double inv_ratio_b = params.rates(1).delta / params.rates(1).beta;

    BoundsReport rep;
    rep.windows.push_back({"profile_0_constraint", inv_ratio_a * q.a / (q.b * (x - q.a)),
                           inv_ratio_a * q.b / (q.a * (x - q.b))});
    rep.windows.push_back({"profile_1_constraint", inv_ratio_b * q.a / (q.b * (1.0 - q.a)),
                           inv_ratio_b * q.b / (q.a * (1.0 - q.b))});

    const std::size_t n = dp.total.size();
    rep.node_pass.resize(n);
    rep.all_pass = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double mixed_degree = dp.of(static_cast<NodeId>(i), 0) / x +
                                    dp.of(static_cast<NodeId>(i), 1);
        bool ok = true;
        for (const auto& w : rep.windows) ok = ok && (mixed_degree > w.lower && mixed_degree < w.upper);
        rep.node_pass[i] = ok ? 1 : 0;
        rep.all_pass = rep.all_pass && ok;
    }
    return rep;
}

}  // namespace hsis
