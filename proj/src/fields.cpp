#include "conformal2d/fields.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "conformal2d/errors.hpp"

namespace conformal2d {

namespace {

const double kLn8 = std::log(8.0);

/// Jet of u = k − 2 ln(s + β|x − c|²), shared by both bubble families.
Jet2 log_quadratic_jet(double k, double s, double beta, Vec2 center, Vec2 x) {
    const Vec2 d = x - center;
    const double denom = s + beta * d.norm2();
    Jet2 j;
    j.value = k - 2.0 * std::log(denom);
    j.gradient = d * (-4.0 * beta / denom);
    j.hessian = Sym2::identity() * (-4.0 * beta / denom) + Sym2::outer(d) * (8.0 * beta * beta / (denom * denom));
    return j;
}

Jet2 combine(double wa, const Jet2& a, double wb, const Jet2& b) {
    Jet2 out;
    out.value = wa * a.value + wb * b.value;
    out.gradient = a.gradient * wa + b.gradient * wb;
    out.hessian = a.hessian * wa + b.hessian * wb;
    return out;
}

Jet2 reflect_jet(const Jet2& j) {
    return {j.value, {j.gradient.x1, -j.gradient.x2}, {j.hessian.a11, -j.hessian.a12, j.hessian.a22}};
}

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

}  // namespace

WirtingerJet to_wirtinger(const Jet2& j) {
    const Vec2& g = j.gradient;
    const Sym2& h = j.hessian;
    return {j.value, Complex{0.5 * g.x1, -0.5 * g.x2}, Complex{0.25 * (h.a11 - h.a22), -0.5 * h.a12},
            0.25 * (h.a11 + h.a22)};
}

Jet2 from_wirtinger(const WirtingerJet& w) {
    Jet2 j;
    j.value = w.value;
    j.gradient = {2.0 * w.dz.real(), -2.0 * w.dz.imag()};
    j.hessian = {2.0 * w.dzz.real() + 2.0 * w.dzzbar, -2.0 * w.dzz.imag(), -2.0 * w.dzz.real() + 2.0 * w.dzzbar};
    return j;
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(std::string name, JetFn jet, ExcludedFn excluded)
    : name_(std::move(name)),
      jet_(std::make_shared<const JetFn>(std::move(jet))),
      excluded_(excluded ? std::make_shared<const ExcludedFn>(std::move(excluded)) : nullptr) {}

bool ScalarField::excluded(Vec2 x) const {
    if (!x.finite()) return true;
    return excluded_ && (*excluded_)(x);
}

Jet2 ScalarField::jet(Vec2 x) const {
    if (excluded(x)) throw DomainError("field '" + name_ + "': point outside the domain");
    return (*jet_)(x);
}

Jet2 eval_jet(const ScalarField& u, Vec2 x) { return u.jet(x); }

ScalarField ScalarField::bubble(double a, double b, Vec2 center) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("bubble: a and b must be positive");
    const double k = 2.0 * std::log(8.0 * a);
    return {"bubble", [=](Vec2 x) { return log_quadratic_jet(k, b, 8.0, center, x); }};
}

ScalarField ScalarField::chen_li(double a, Vec2 center) {
    if (!(a > 0.0)) throw std::invalid_argument("chen_li: a must be positive");
    const double k = 2.0 * std::log(8.0 * a);
    return {"chen_li", [=](Vec2 x) { return log_quadratic_jet(k, 8.0 * a * a, 1.0, center, x); }};
}

ScalarField ScalarField::liouville(HolomorphicMap f) {
    auto excluded = [f](Vec2 x) { return f.excluded(x.to_complex()); };
    auto jet = [f](Vec2 x) {
        const HoloJet j = f.eval(x.to_complex());
        const double s = 1.0 + std::norm(j.f);
        const Complex h = j.d2 / j.d1;
        // u = ln 8 + ln|f'|² − 2 ln(1 + |f|²), assembled in Wirtinger form.
        const Complex fz = j.d1 * std::conj(j.f) / s;
        const Complex fzz = j.d2 * std::conj(j.f) / s - fz * fz;
        const double fzzbar = std::norm(j.d1) / (s * s);
        WirtingerJet w;
        w.value = kLn8 + std::log(std::norm(j.d1)) - 2.0 * std::log(s);
        w.dz = h - 2.0 * fz;
        w.dzz = j.d3 / j.d1 - h * h - 2.0 * fzz;
        w.dzzbar = -2.0 * fzzbar;
        return from_wirtinger(w);
    };
    return {"liouville[" + f.name() + "]", std::move(jet), std::move(excluded)};
}

ScalarField ScalarField::exp_example() {
    return {"exp_example", [](Vec2 x) {
                const double t = 2.0 * x.x1;
                const double sigma = 1.0 / (1.0 + std::exp(-t));
                Jet2 j;
                j.value = kLn8 + t - 2.0 * softplus(t);
                j.gradient = {2.0 - 4.0 * sigma, 0.0};
                j.hessian = Sym2::diag(-8.0 * sigma * (1.0 - sigma), 0.0);
                return j;
            }};
}

ScalarField ScalarField::quadratic(double a) {
    return {"quadratic", [a](Vec2 x) {
                return Jet2{a * x.x1 * x.x1, {2.0 * a * x.x1, 0.0}, Sym2::diag(2.0 * a, 0.0)};
            }};
}

ScalarField ScalarField::constant(double c) {
    return {"constant", [c](Vec2) { return Jet2{c, {}, {}}; }};
}

ScalarField ScalarField::affine(double c, Vec2 g) {
    return {"affine", [c, g](Vec2 x) { return Jet2{c + dot(g, x), g, {}}; }};
}

ScalarField ScalarField::radial(const RadialProfile& profile, Vec2 center) {
    auto spline = std::make_shared<const RadialSpline>(profile);
    auto excluded = [spline, center](Vec2 x) {
        const double r = (x - center).norm();
        return r > spline->r_max() || (!spline->includes_origin() && r < spline->r_min());
    };
    auto jet = [spline, center](Vec2 x) {
        const Vec2 d = x - center;
        const double r = d.norm();
        const auto s = (*spline)(r);
        Jet2 j;
        j.value = s.value;
        if (r < 1e-8) {
            // Even extension: v'(r)/r → v''(0).
            const double c = (*spline)(0.0).d2;
            j.gradient = d * c;
            j.hessian = Sym2::identity() * c;
            return j;
        }
        const Vec2 e = d * (1.0 / r);
        const Sym2 ee = Sym2::outer(e);
        j.gradient = e * s.d1;
        j.hessian = ee * s.d2 + (Sym2::identity() - ee) * (s.d1 / r);
        return j;
    };
    return {"radial", std::move(jet), std::move(excluded)};
}

// ---------------------------------------------------------------------------

ScalarField pullback(const ScalarField& u, const HolomorphicMap& psi) {
    auto excluded = [u, psi](Vec2 x) {
        const Complex z = x.to_complex();
        if (psi.excluded(z)) return true;
        return u.excluded(Vec2::from_complex(psi.eval(z).f));
    };
    auto jet = [u, psi](Vec2 x) {
        const HoloJet p = psi.eval(x.to_complex());
        const WirtingerJet w = to_wirtinger(u.jet(Vec2::from_complex(p.f)));
        const Complex h = p.d2 / p.d1;
        WirtingerJet out;
        out.value = w.value + std::log(std::norm(p.d1));
        out.dz = w.dz * p.d1 + h;
        out.dzz = w.dzz * p.d1 * p.d1 + w.dz * p.d2 + p.d3 / p.d1 - h * h;
        out.dzzbar = w.dzzbar * std::norm(p.d1);
        return from_wirtinger(out);
    };
    return {"pullback[" + u.name() + "," + psi.name() + "]", std::move(jet), std::move(excluded)};
}

ScalarField pullback(const ScalarField& u, const MobiusMap& psi) {
    if (!psi.conjugating()) {
        ScalarField v = pullback(u, HolomorphicMap::mobius(psi));
        return v;
    }
    // ψ(z) = g(z̄): u_ψ = (u_g)∘c with c the reflection, ln|J_c| = 0.
    const MobiusMap g(psi.a(), psi.b(), psi.c(), psi.d(), false);
    const ScalarField ug = pullback(u, HolomorphicMap::mobius(g));
    auto reflect = [](Vec2 x) { return Vec2{x.x1, -x.x2}; };
    return {"pullback[" + u.name() + ",mobius*]", [ug, reflect](Vec2 x) { return reflect_jet(ug.jet(reflect(x))); },
            [ug, reflect](Vec2 x) { return ug.excluded(reflect(x)); }};
}

// ---------------------------------------------------------------------------

Jet2 fd_jet(const ScalarField& u, Vec2 x, double h, bool richardson) {
    if (!(h > 0.0)) throw std::invalid_argument("fd_jet: step must be positive");
    auto plain = [&u, x](double s) {
        auto f = [&](double dx, double dy) {
            const Vec2 p = x + Vec2{dx, dy};
            if (u.excluded(p)) throw DomainError("fd_jet: stencil leaves the domain");
            return u.jet(p).value;
        };
        const double f0 = f(0, 0);
        const double fpx = f(s, 0), fmx = f(-s, 0), fpy = f(0, s), fmy = f(0, -s);
        const double fpp = f(s, s), fpm = f(s, -s), fmp = f(-s, s), fmm = f(-s, -s);
        Jet2 j;
        j.value = f0;
        j.gradient = {(fpx - fmx) / (2.0 * s), (fpy - fmy) / (2.0 * s)};
        j.hessian = {(fpx - 2.0 * f0 + fmx) / (s * s), (fpp - fpm - fmp + fmm) / (4.0 * s * s),
                     (fpy - 2.0 * f0 + fmy) / (s * s)};
        return j;
    };
    if (!richardson) return plain(h);
    return combine(4.0 / 3.0, plain(0.5 * h), -1.0 / 3.0, plain(h));
}

Jet2 fd_jet(const ScalarField& u, Vec2 x) { return fd_jet(u, x, 1e-4 * (1.0 + x.norm())); }

double exp_mass_in_disc(const ScalarField& u, Vec2 center, double radius, int angular_points) {
    if (!(radius > 0.0) || angular_points < 4) throw std::invalid_argument("exp_mass_in_disc: bad arguments");
    const double dtheta = 2.0 * std::numbers::pi / angular_points;
    auto ring = [&](double r) {
        double acc = 0.0;
        for (int k = 0; k < angular_points; ++k) {
            const double t = dtheta * k;
            acc += std::exp(u.value(center + Vec2{r * std::cos(t), r * std::sin(t)}));
        }
        return acc * dtheta * r;
    };
    // Geometric panels resolve both the core and the algebraic tail.
    using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
    double lo = 0.0, hi = radius * std::ldexp(1.0, -30), total = 0.0;
    while (lo < radius) {
        total += Quad::integrate(ring, lo, hi, 5, 1e-10);
        lo = hi;
        hi = std::min(radius, 2.0 * hi);
    }
    return total;
}

double chen_li_tail_bound(double a, double radius) {
    return 64.0 * std::numbers::pi * a * a / (radius * radius);
}

}  // namespace conformal2d
