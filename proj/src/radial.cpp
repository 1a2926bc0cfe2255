#include "conformal2d/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "conformal2d/errors.hpp"

namespace conformal2d {

RadialProfile minimize_on_circles(const ScalarField& u, Vec2 center, std::span<const double> radii,
                                  int angular_samples) {
    if (angular_samples < 3) throw std::invalid_argument("minimize_on_circles: need at least 3 angles");
    RadialProfile out;
    out.r.assign(radii.begin(), radii.end());
    out.v.reserve(radii.size());
    const double dt = 2.0 * std::numbers::pi / angular_samples;
    for (double r : radii) {
        auto at = [&](double t) { return u.value(center + Vec2{r * std::cos(t), r * std::sin(t)}); };
        if (r == 0.0) {
            out.v.push_back(u.value(center));
            continue;
        }
        int best = 0;
        double vbest = at(0.0);
        for (int k = 1; k < angular_samples; ++k) {
            const double val = at(k * dt);
            if (val < vbest) vbest = val, best = k;
        }
        const auto [t, val] =
            boost::math::tools::brent_find_minima(at, (best - 1) * dt, (best + 1) * dt, 50);
        out.v.push_back(std::min(vbest, val));
    }
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------

EnvelopeResult inf_envelope(const RadialProfile& p, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("inf_envelope: eps must be positive");
    p.validate();
    const std::size_t n = p.size();
    EnvelopeResult out;
    out.epsilon = eps;
    out.profile.r = p.r;
    out.profile.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = p.v[i];
        for (std::size_t j = 0; j < n; ++j) {
            const double d = p.r[j] - p.r[i];
            best = std::min(best, p.v[j] + d * d / eps);
        }
        out.profile.v[i] = best;
    }

    const auto [vmin, vmax] = std::minmax_element(p.v.begin(), p.v.end());
    const double delta = std::sqrt(eps * (*vmax - *vmin));
    const double lo = p.r.front() > 0.0 ? p.r.front() + delta : 0.0;
    const double hi = p.r.back() - delta;
    out.interior_begin = n;
    out.interior_end = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (p.r[i] >= lo && p.r[i] <= hi) {
            out.interior_begin = std::min(out.interior_begin, i);
            out.interior_end = i + 1;
        }
    }
    if (out.interior_begin >= out.interior_end) out.interior_begin = out.interior_end = 0;

    const auto& r = p.r;
    auto w = [&](std::size_t i) { return out.profile.v[i] - r[i] * r[i] / eps; };
    for (std::size_t i = out.interior_begin; i < out.interior_end; ++i) {
        out.sup_distance_to_input = std::max(out.sup_distance_to_input, std::abs(out.profile.v[i] - p.v[i]));
        if (i == out.interior_begin || i + 1 >= out.interior_end) continue;
        // Second difference normalized so that it reduces to w₊ − 2w + w₋ on uniform grids.
        const double h0 = r[i] - r[i - 1], h1 = r[i + 1] - r[i];
        const double d2 = (w(i + 1) * h0 + w(i - 1) * h1 - w(i) * (h0 + h1)) / (0.5 * (h0 + h1));
        out.semiconcavity_defect = std::max(out.semiconcavity_defect, d2);
    }
    return out;
}

// ---------------------------------------------------------------------------

RadialLambda radial_lambda(double v, double v1, double v2, double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("radial_lambda: r must be nonnegative");
    const double s = std::exp(-v);
    const double l1 = s * (-v2 + 0.25 * v1 * v1);
    if (r == 0.0) {
        if (v1 != 0.0) throw std::invalid_argument("radial_lambda: v'(0) must vanish");
        return {l1, l1};
    }
    return {l1, s * (-v1 / r - 0.25 * v1 * v1)};
}

CheckReport check_monotone_4log(const RadialProfile& p, double k0) {
    p.validate();
    CheckReport rep;
    rep.name = "monotone_4log";
    rep.tolerance = 1e-10;
    std::size_t first = 0;
    while (first < p.size() && !(p.r[first] > k0 && p.r[first] > 0.0)) ++first;
    if (p.size() - first < 2) throw std::invalid_argument("check_monotone_4log: grid does not cover (k0, r_max)");

    auto w = [&](std::size_t i) { return p.v[i] + 4.0 * std::log(p.r[i]); };
    double empirical_k0 = p.r[first];
    double min_inc = std::numeric_limits<double>::infinity();
    for (std::size_t i = first; i + 1 < p.size(); ++i) {
        const double inc = w(i + 1) - w(i);
        min_inc = std::min(min_inc, inc);
        rep.record({p.r[i + 1], 0.0}, std::max(0.0, -inc));
        if (inc < -rep.tolerance) empirical_k0 = p.r[i + 1];
    }
    rep.details["empirical_k0"] = empirical_k0;
    rep.details["min_increment"] = min_inc;
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------

double RadialSolution::max_residual() const {
    double m = 0.0;
    for (double x : residual) m = std::max(m, x);
    return m;
}

namespace {

constexpr std::uintmax_t kRootIterations = 200;

}  // namespace

double diagonal_seed(const SymmetricFunction& f) {
    auto g = [&](double m) { return f.value(m, m) - 1.0; };
    if (!(g(0.0) < 0.0)) throw SeedError("diagonal_seed: f(0, 0) ≥ 1 for '" + f.name() + "'");
    double hi = 1.0;
    while (!(g(hi) >= 0.0)) {
        hi *= 2.0;
        if (hi > 1e300) throw SeedError("diagonal_seed: f(μ, μ) never reaches 1 for '" + f.name() + "'");
    }
    std::uintmax_t iters = kRootIterations;
    const auto [a, b] =
        boost::math::tools::toms748_solve(g, 0.0, hi, boost::math::tools::eps_tolerance<double>(), iters);
    const double mu = std::abs(g(a)) <= std::abs(g(b)) ? a : b;
    if (!(mu > 0.0)) throw SeedError("diagonal_seed: no positive root for '" + f.name() + "'");
    return mu;
}

std::optional<double> solve_lambda1(const SymmetricFunction& f, double lambda2) {
    if (!std::isfinite(lambda2)) return std::nullopt;
    const double s = f.cone().boundary_slope();
    double lo;
    if (s == 0.0) {
        if (!(lambda2 > 0.0)) return std::nullopt;
        lo = 0.0;
    } else {
        lo = std::max(-s * lambda2, -lambda2 / s);
    }
    auto g = [&](double l1) { return f.value(l1, lambda2) - 1.0; };
    const double g_lo = g(lo);
    if (!(g_lo < 0.0)) return std::nullopt;

    double hi = std::max(lo, lambda2) + 2.0 * std::max(1.0, std::abs(lambda2));
    for (int k = 0; !(g(hi) >= 0.0); ++k) {
        if (k > 200 || !std::isfinite(hi)) throw StepFailure("solve_lambda1: cannot bracket the λ1 root");
        hi = lo + 2.0 * (hi - lo);
    }
    std::uintmax_t iters = kRootIterations;
    const auto [a, b] =
        boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(), iters);
    const double root = std::abs(g(a)) <= std::abs(g(b)) ? a : b;
    if (!(root > lo)) return std::nullopt;
    return root;
}

namespace {

using State = std::array<double, 2>;  // (v, v')

/// Thrown by right-hand sides whose state admits no admissible λ.
struct StageFailure {};

enum class Stop { end, stalled, halted };

struct Outcome {
    Stop stop;
    double r;
};

/// Dormand–Prince 5(4) with standard step-size control. `accept(r, y)` is
/// called after each accepted step and returns false to halt.
template <class Rhs, class Accept>
Outcome dopri5(Rhs&& rhs, double r, State y, double r_end, const OdeConfig& cfg, Accept&& accept,
               std::size_t& rejected) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    auto axpy = [](const State& y0, double h, std::initializer_list<std::pair<double, const State*>> terms) {
        State out = y0;
        for (const auto& [c, k] : terms)
            for (int i = 0; i < 2; ++i) out[i] += h * c * (*k)[i];
        return out;
    };

    double h = std::min(cfg.h_init, cfg.h_max);
    for (std::size_t step = 0; step < cfg.max_steps; ++step) {
        if (r >= r_end) return {Stop::end, r};
        h = std::min(h, r_end - r);
        if (h < cfg.h_min) return {Stop::stalled, r};
        State k1, k2, k3, k4, k5, k6, k7, y5;
        try {
            k1 = rhs(r, y);
        } catch (const StageFailure&) {
            return {Stop::stalled, r};
        }
        double err = std::numeric_limits<double>::infinity();
        try {
            k2 = rhs(r + c2 * h, axpy(y, h, {{a21, &k1}}));
            k3 = rhs(r + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
            k4 = rhs(r + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
            k5 = rhs(r + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
            k6 = rhs(r + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
            y5 = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
            k7 = rhs(r + h, y5);
            double sum = 0.0;
            for (int i = 0; i < 2; ++i) {
                const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
                sum += (e / sc) * (e / sc);
            }
            err = std::sqrt(0.5 * sum);
        } catch (const StageFailure&) {
            err = std::numeric_limits<double>::infinity();
        }
        if (!(err <= 1.0) || !std::isfinite(y5[0]) || !std::isfinite(y5[1])) {
            ++rejected;
            h *= std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.25;
            continue;
        }
        r += h;
        y = y5;
        if (!accept(r, y)) return {Stop::halted, r};
        const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h = std::min(h * grow, cfg.h_max);
    }
    throw StepFailure("radial solver: step budget exhausted");
}

double lambda2_of(double r, const State& y) {
    return std::exp(-y[0]) * (-y[1] / r - 0.25 * y[1] * y[1]);
}

/// Shared driver for f(λ(A^u)) = 1 once a start state at r0 > 0 is known.
void shoot(const SymmetricFunction& f, const ConeIndex& p, double r0, State y0, double r_max, const OdeConfig& cfg,
           RadialSolution& out) {
    auto rhs = [&](double r, const State& y) -> State {
        const double l2 = lambda2_of(r, y);
        const auto l1 = solve_lambda1(f, l2);
        if (!l1 || !(std::abs(f.value(*l1, l2) - 1.0) <= cfg.root_residual)) throw StageFailure{};
        return {y[1], 0.25 * y[1] * y[1] - *l1 * std::exp(y[0])};
    };
    // Appends (r, y) if λ is admissible there; false means the cone was left.
    auto record = [&](double r, const State& y) {
        State dy;
        try {
            dy = rhs(r, y);
        } catch (const StageFailure&) {
            return false;
        }
        const RadialLambda lam = radial_lambda(y[0], y[1], dy[1], r);
        if (!in_cone(lam.lambda1, lam.lambda2, p).inside) return false;
        out.profile.r.push_back(r);
        out.profile.v.push_back(y[0]);
        out.profile.dv.push_back(y[1]);
        out.profile.ddv.push_back(dy[1]);
        out.lambda1.push_back(lam.lambda1);
        out.lambda2.push_back(lam.lambda2);
        out.residual.push_back(std::abs(f.value(lam.lambda1, lam.lambda2) - 1.0));
        return true;
    };
    if (!record(r0, y0)) {
        out.cone_exit = r0;
        return;
    }
    const Outcome res = dopri5(rhs, r0, y0, r_max, cfg, record, out.rejected_steps);
    if (res.stop == Stop::end) return;
    // Stalls come from states with no admissible λ1 ahead; halts from cone exits at accepted points.
    if (res.stop == Stop::stalled && std::abs(out.profile.dv.back()) > 1e12) {
        out.blowup = res.r;
    } else {
        out.cone_exit = res.r;
    }
}

}  // namespace

RadialSolution ode_solve(const SymmetricFunction& f, const ConeIndex& p, double v0, double r_max,
                         const OdeConfig& cfg) {
    if (!std::isfinite(v0)) throw std::invalid_argument("ode_solve: v0 must be finite");
    if (!(r_max > cfg.series_radius)) throw std::invalid_argument("ode_solve: r_max must exceed the series radius");
    RadialSolution out;
    out.mu = diagonal_seed(f);
    if (!in_cone(out.mu, out.mu, p).inside) {
        out.cone_exit = 0.0;
        return out;
    }
    // v = v0 + c r² + (c²/4) r⁴ + O(r⁶) with c = −μe^{v0}/2, for every symmetric f.
    const double c = -0.5 * out.mu * std::exp(v0);
    out.profile.r.push_back(0.0);
    out.profile.v.push_back(v0);
    out.profile.dv.push_back(0.0);
    out.profile.ddv.push_back(2.0 * c);
    const RadialLambda lam0 = radial_lambda(v0, 0.0, 2.0 * c, 0.0);
    out.lambda1.push_back(lam0.lambda1);
    out.lambda2.push_back(lam0.lambda2);
    out.residual.push_back(std::abs(f.value(lam0.lambda1, lam0.lambda2) - 1.0));

    const double rs = cfg.series_radius;
    const State ys{v0 + c * rs * rs + 0.25 * c * c * rs * rs * rs * rs, 2.0 * c * rs + c * c * rs * rs * rs};
    shoot(f, p, rs, ys, r_max, cfg, out);
    return out;
}

RadialSolution ode_solve_from(const SymmetricFunction& f, const ConeIndex& p, double r0, double v0, double dv0,
                              double r_max, const OdeConfig& cfg) {
    if (!(r0 > 0.0) || !(r_max > r0)) throw std::invalid_argument("ode_solve_from: need 0 < r0 < r_max");
    if (!std::isfinite(v0) || !std::isfinite(dv0)) throw std::invalid_argument("ode_solve_from: non-finite state");
    RadialSolution out;
    out.mu = std::numeric_limits<double>::quiet_NaN();
    shoot(f, p, r0, {v0, dv0}, r_max, cfg, out);
    return out;
}

RadialSolution solve_cone_boundary(const ConeIndex& p, double r0, double v0, double dv0, double r_max,
                                   const OdeConfig& cfg) {
    const double s = p.boundary_slope();
    if (!(s > 0.0)) throw std::invalid_argument("solve_cone_boundary: requires p < 2");
    if (!(r0 > 0.0) || !(r_max > r0)) throw std::invalid_argument("solve_cone_boundary: need 0 < r0 < r_max");
    RadialSolution out;
    out.mu = std::numeric_limits<double>::quiet_NaN();

    auto rhs = [&](double r, const State& y) -> State {
        const double q = 0.25 * y[1] * y[1];
        return {y[1], q - (y[1] / r + q) / s};
    };
    auto record = [&](double r, const State& y) {
        const double ddv = rhs(r, y)[1];
        const RadialLambda lam = radial_lambda(y[0], y[1], ddv, r);
        out.profile.r.push_back(r);
        out.profile.v.push_back(y[0]);
        out.profile.dv.push_back(y[1]);
        out.profile.ddv.push_back(ddv);
        out.lambda1.push_back(lam.lambda1);
        out.lambda2.push_back(lam.lambda2);
        out.residual.push_back(std::abs(lam.lambda2 + s * lam.lambda1) / std::max(1.0, std::abs(lam.lambda2)));
        return std::abs(y[1]) <= 1e12 && std::isfinite(lam.lambda1) && std::isfinite(lam.lambda2);
    };
    record(r0, {v0, dv0});
    const Outcome res = dopri5(rhs, r0, State{v0, dv0}, r_max, cfg, record, out.rejected_steps);
    if (res.stop != Stop::end) out.blowup = res.r;
    return out;
}

// ---------------------------------------------------------------------------

EtildeDiagnostics etilde_diagnostics(const RadialProfile& p, const ConeIndex& cone, double tol) {
    const double s = cone.boundary_slope();
    if (!(s > 0.0)) throw std::invalid_argument("etilde_diagnostics: requires p < 2");
    if (p.ddv.size() != p.size() || p.dv.size() != p.size()) {
        throw std::invalid_argument("etilde_diagnostics: profile lacks derivatives");
    }
    EtildeDiagnostics out;
    out.min_g = out.min_dg = out.min_dk = std::numeric_limits<double>::infinity();
    double kmin = out.min_g, kmax = -kmin, kabs = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double r = p.r[i], d1 = p.dv[i], d2 = p.ddv[i];
        if (!(r > 0.0) || !(d1 < -4.0 / r)) continue;
        const double g = 1.0 / d1 + 0.25 * r;
        const double dg = -d2 / (d1 * d1) + 0.25;
        const double w = std::pow(r, -1.0 / s);
        const double k = w * g;
        const double dk = w * (dg - g / (s * r));
        out.r.push_back(r);
        out.g.push_back(g);
        out.dg.push_back(dg);
        out.k.push_back(k);
        out.dk.push_back(dk);
        out.min_g = std::min(out.min_g, g);
        out.min_dg = std::min(out.min_dg, dg);
        out.min_dk = std::min(out.min_dk, dk);
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
        kabs = std::max(kabs, std::abs(k));
        if (!(g > 0.0)) out.g_positive = false;
        if (!(dg > 0.0)) out.g_increasing = false;
        if (dk < -tol * w * (std::abs(dg) + std::abs(g / (s * r)))) out.k_nondecreasing = false;
    }
    if (out.r.empty()) out.min_g = out.min_dg = out.min_dk = 0.0;
    out.k_spread = kabs > 0.0 ? (kmax - kmin) / kabs : 0.0;
    return out;
}

}  // namespace conformal2d
