#include "conformal2d/moving_spheres.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

#include "conformal2d/errors.hpp"
#include "conformal2d/mobius.hpp"
#include "conformal2d/radial.hpp"

namespace conformal2d {

ScalarField ms_transform(const ScalarField& u, Vec2 x, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("ms_transform: lambda must be positive");
    return pullback(u, MobiusMap::sphere_inversion(x, lambda));
}

namespace {

/// u_{x,λ}(y) from values only; nullopt where either side is undefined.
std::optional<double> reflected(const ScalarField& u, Vec2 x, double lambda, Vec2 y) {
    const Vec2 d = y - x;
    const double r2 = d.norm2();
    const Vec2 img = x + d * (lambda * lambda / r2);
    if (u.excluded(img)) return std::nullopt;
    return u.value(img) - 2.0 * std::log(r2 / (lambda * lambda));
}

std::vector<double> log_radii(double lo, double hi, int n) {
    std::vector<double> out(n);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

struct Slack {
    bool admissible = true;
    double min_slack = std::numeric_limits<double>::infinity();
};

Slack slack(const ScalarField& u, Vec2 x, double lambda, const SphereSampling& s) {
    Slack out;
    for (double rho : log_radii(lambda, std::max(100.0, 10.0 * lambda), s.radii)) {
        for (int k = 0; k < s.angles; ++k) {
            const double t = 2.0 * std::numbers::pi * k / s.angles;
            const Vec2 y = x + Vec2{rho * std::cos(t), rho * std::sin(t)};
            if (u.excluded(y)) continue;
            const auto ur = reflected(u, x, lambda, y);
            if (!ur) continue;
            const double uy = u.value(y);
            const double sl = uy - *ur;
            out.min_slack = std::min(out.min_slack, sl);
            if (sl < -s.slack_tol * (1.0 + std::abs(uy))) out.admissible = false;
        }
    }
    if (!std::isfinite(out.min_slack)) throw DomainError("critical_lambda: no sample points in the domain");
    return out;
}

}  // namespace

MovingSphereReport critical_lambda(const ScalarField& u, Vec2 x, double lam_max, double tol,
                                   const SphereSampling& sampling) {
    if (!(lam_max > 0.0)) throw std::invalid_argument("critical_lambda: lam_max must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("critical_lambda: tol must be positive");
    MovingSphereReport rep;
    rep.x = x;

    double lo = lam_max, hi = lam_max;
    Slack at_lo = slack(u, x, lam_max, sampling);
    if (at_lo.admissible) {
        rep.unbounded = true;
    } else {
        do {
            hi = lo;
            lo *= 0.5;
            if (lo < 1e-12 * lam_max) throw DomainError("critical_lambda: no admissible radius found");
            at_lo = slack(u, x, lo, sampling);
            ++rep.bisection_steps;
        } while (!at_lo.admissible);
        while (hi - lo > tol * hi) {
            const double mid = 0.5 * (lo + hi);
            const Slack s = slack(u, x, mid, sampling);
            ++rep.bisection_steps;
            if (s.admissible) {
                lo = mid;
                at_lo = s;
            } else {
                hi = mid;
            }
        }
    }
    rep.lambda_bar = lo;
    rep.min_slack = at_lo.min_slack;

    for (double rho : log_radii(sampling.equality_inner, sampling.equality_outer, sampling.equality_radii)) {
        for (int k = 0; k < sampling.angles; ++k) {
            const double t = 2.0 * std::numbers::pi * k / sampling.angles;
            const Vec2 y = x + Vec2{rho * std::cos(t), rho * std::sin(t)};
            if (u.excluded(y)) continue;
            const auto ur = reflected(u, x, lo, y);
            if (ur) rep.equality_residual = std::max(rep.equality_residual, std::abs(*ur - u.value(y)));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

struct BubbleParams {
    double la, lb, cx, cy;  // ln a, ln b, center
};

double bubble_value(const BubbleParams& p, Vec2 x) {
    const double q = (x - Vec2{p.cx, p.cy}).norm2();
    return 2.0 * (std::log(8.0) + p.la) - 2.0 * std::log(8.0 * q + std::exp(p.lb));
}

double sup_residual(const BubbleParams& p, std::span<const Vec2> pts, std::span<const double> vals) {
    double m = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) m = std::max(m, std::abs(bubble_value(p, pts[i]) - vals[i]));
    return m;
}

/// Center at the sample maximum; a, b from the linear relation
/// e^{−u/2} = q/a + b/(8a) in q = |x − c|².
BubbleParams initial_guess(std::span<const Vec2> pts, std::span<const double> vals) {
    const std::size_t imax = std::max_element(vals.begin(), vals.end()) - vals.begin();
    const Vec2 c = pts[imax];
    Eigen::MatrixXd m(pts.size(), 2);
    Eigen::VectorXd rhs(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        m(i, 0) = (pts[i] - c).norm2();
        m(i, 1) = 1.0;
        rhs(i) = std::exp(-0.5 * vals[i]);
    }
    const Eigen::Vector2d sol = m.colPivHouseholderQr().solve(rhs);
    double a = 1.0 / sol(0), b = 8.0 * a * sol(1);
    if (!(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b))) {
        a = 1.0;
        b = 8.0 * std::exp(-0.5 * vals[imax]);
    }
    return {std::log(a), std::log(b), c.x1, c.x2};
}

}  // namespace

BubbleFit bubble_fit(std::span<const Vec2> points, std::span<const double> values,
                     std::span<const Vec2> validation_points, std::span<const double> validation_values) {
    if (points.size() < 4) throw std::invalid_argument("bubble_fit: need at least 4 samples");
    if (points.size() != values.size() || validation_points.size() != validation_values.size()) {
        throw std::invalid_argument("bubble_fit: point and value counts differ");
    }
    if (validation_points.empty()) {
        validation_points = points;
        validation_values = values;
    }
    const std::size_t n = points.size();
    BubbleParams p = initial_guess(points, values);
    const double initial_residual = sup_residual(p, validation_points, validation_values);

    auto residuals = [&](const BubbleParams& q) {
        Eigen::VectorXd r(n);
        for (std::size_t i = 0; i < n; ++i) r(i) = bubble_value(q, points[i]) - values[i];
        return r;
    };
    auto jacobian = [&](const BubbleParams& q) {
        Eigen::MatrixXd j(n, 4);
        const double b = std::exp(q.lb);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 d = points[i] - Vec2{q.cx, q.cy};
            const double den = 8.0 * d.norm2() + b;
            j(i, 0) = 2.0;
            j(i, 1) = -2.0 * b / den;
            j(i, 2) = 32.0 * d.x1 / den;
            j(i, 3) = 32.0 * d.x2 / den;
        }
        return j;
    };

    BubbleFit out;
    Eigen::VectorXd r = residuals(p);
    double cost = r.squaredNorm();
    double damping = 1e-3;
    bool converged = false;
    for (int it = 0; it < 200 && cost > 0.0 && !converged; ++it) {
        out.iterations = it + 1;
        const Eigen::MatrixXd j = jacobian(p);
        const Eigen::MatrixXd jtj = j.transpose() * j;
        const Eigen::VectorXd g = j.transpose() * r;
        bool improved = false;
        for (int tries = 0; tries < 30 && !improved; ++tries) {
            Eigen::MatrixXd lhs = jtj;
            lhs.diagonal() += damping * jtj.diagonal().cwiseMax(1e-12);
            const Eigen::Vector4d step = lhs.ldlt().solve(-g);
            const BubbleParams trial{p.la + step(0), p.lb + step(1), p.cx + step(2), p.cy + step(3)};
            const Eigen::VectorXd rt = residuals(trial);
            const double ct = rt.squaredNorm();
            if (std::isfinite(ct) && ct < cost) {
                const double rel = step.norm() / (1.0 + Eigen::Vector4d(p.la, p.lb, p.cx, p.cy).norm());
                p = trial;
                r = rt;
                const double drop = cost - ct;
                cost = ct;
                damping = std::max(damping / 3.0, 1e-15);
                improved = true;
                converged = rel < 1e-15 || drop <= 1e-30 * (1.0 + cost);
            } else {
                damping *= 4.0;
            }
        }
        if (!improved) break;
    }

    out.a = std::exp(p.la);
    out.b = std::exp(p.lb);
    out.center = {p.cx, p.cy};
    out.residual = sup_residual(p, validation_points, validation_values);
    if (!(out.residual <= 1e3 * std::max(initial_residual, 1e-300))) {
        throw FitDiverged("bubble_fit: residual grew from " + std::to_string(initial_residual) + " to " +
                          std::to_string(out.residual));
    }
    return out;
}

BubbleFit bubble_fit(const ScalarField& u, std::span<const Vec2> points, std::span<const Vec2> validation) {
    std::vector<double> vals, vvals;
    vals.reserve(points.size());
    for (const Vec2& p : points) vals.push_back(u.value(p));
    for (const Vec2& p : validation) vvals.push_back(u.value(p));
    return bubble_fit(points, vals, validation, vvals);
}

// ---------------------------------------------------------------------------

AlphaEstimate estimate_alpha(const ScalarField& u, Vec2 x0, std::span<const double> radii) {
    if (radii.size() < 4) throw std::invalid_argument("estimate_alpha: need at least 4 radii");
    const RadialProfile prof = minimize_on_circles(u, x0, radii);
    AlphaEstimate out;
    out.r = prof.r;
    for (std::size_t i = 0; i < prof.size(); ++i) {
        if (!(prof.r[i] > 0.0)) throw std::invalid_argument("estimate_alpha: radii must be positive");
        out.w.push_back(prof.v[i] + 4.0 * std::log(prof.r[i]));
    }
    const std::size_t n = out.r.size(), first = n / 2;
    Eigen::MatrixXd m(n - first, 2);
    Eigen::VectorXd rhs(n - first);
    for (std::size_t i = first; i < n; ++i) {
        m(i - first, 0) = 1.0;
        m(i - first, 1) = 1.0 / (out.r[i] * out.r[i]);
        rhs(i - first) = out.w[i];
    }
    const Eigen::Vector2d sol = m.colPivHouseholderQr().solve(rhs);
    out.alpha = sol(0);
    out.beta = sol(1);
    out.last_value = out.w.back();
    out.tail_slope = (out.w[n - 1] - out.w[n - 2]) / std::log(out.r[n - 1] / out.r[n - 2]);
    return out;
}

}  // namespace conformal2d
