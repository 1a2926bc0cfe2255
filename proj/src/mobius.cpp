#include "conformal2d/mobius.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>
#include <utility>

#include "conformal2d/errors.hpp"

namespace conformal2d {

namespace {

Jacobian make_jacobian(const Mat2& j) {
    Jacobian out;
    out.j = j;
    out.det = j.det();
    out.conf = std::abs(out.det);
    out.o = Orthogonal2(j * (1.0 / std::sqrt(out.conf)));
    return out;
}

Mat2 holomorphic_jacobian(Complex d1) { return {d1.real(), -d1.imag(), d1.imag(), d1.real()}; }

}  // namespace

// ---------------------------------------------------------------------------
// MobiusMap

MobiusMap::MobiusMap(Complex a, Complex b, Complex c, Complex d, bool conjugating)
    : conjugating_(conjugating) {
    const Complex det = a * d - b * c;
    if (!(std::abs(det) > 0.0) || !std::isfinite(std::abs(det))) {
        throw std::invalid_argument("MobiusMap: ad - bc must be nonzero and finite");
    }
    const Complex s = std::sqrt(det);
    a_ = a / s;
    b_ = b / s;
    c_ = c / s;
    d_ = d / s;
}

MobiusMap MobiusMap::translation(Vec2 t) { return {1.0, t.to_complex(), 0.0, 1.0}; }

MobiusMap MobiusMap::dilation(double lambda) {
    if (lambda == 0.0) throw std::invalid_argument("MobiusMap::dilation: factor must be nonzero");
    return {lambda, 0.0, 0.0, 1.0};
}

MobiusMap MobiusMap::rotation(double theta) { return {std::polar(1.0, theta), 0.0, 0.0, 1.0}; }

MobiusMap MobiusMap::reflection() { return {1.0, 0.0, 0.0, 1.0, true}; }

MobiusMap MobiusMap::inversion() { return {0.0, 1.0, 1.0, 0.0, true}; }

MobiusMap MobiusMap::sphere_inversion(Vec2 center, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("sphere_inversion: radius must be positive");
    const Complex x = center.to_complex();
    return {x, lambda * lambda - std::norm(x), 1.0, -std::conj(x), true};
}

Complex MobiusMap::argument(Vec2 p) const {
    const Complex z = p.to_complex();
    return conjugating_ ? std::conj(z) : z;
}

Complex MobiusMap::denominator(Vec2 p) const { return c_ * argument(p) + d_; }

std::optional<Vec2> MobiusMap::pole() const {
    if (c_ == Complex{0.0}) return std::nullopt;
    const Complex z = -d_ / c_;
    return Vec2::from_complex(conjugating_ ? std::conj(z) : z);
}

bool MobiusMap::near_pole(Vec2 p) const { return std::abs(denominator(p)) < kPoleGuard; }

Vec2 MobiusMap::apply(Vec2 p) const {
    const Complex den = denominator(p);
    if (std::abs(den) < kPoleGuard) throw PoleError("MobiusMap::apply: point at the pole");
    return Vec2::from_complex((a_ * argument(p) + b_) / den);
}

MobiusMap::Derivatives MobiusMap::holomorphic_derivatives(Vec2 p) const {
    const Complex den = denominator(p);
    if (std::abs(den) < kPoleGuard) throw PoleError("MobiusMap: derivative at the pole");
    const Complex inv = 1.0 / den;
    const Complex inv2 = inv * inv;
    return {inv2, -2.0 * c_ * inv2 * inv, 6.0 * c_ * c_ * inv2 * inv2};
}

Jacobian jacobian(const MobiusMap& m, Vec2 p) {
    const Complex g1 = m.holomorphic_derivatives(p).d1;
    Mat2 j = holomorphic_jacobian(g1);
    if (m.conjugating()) j = j * Mat2{1.0, 0.0, 0.0, -1.0};
    return make_jacobian(j);
}

MobiusMap compose(const MobiusMap& m1, const MobiusMap& m2) {
    // m1(w) = M1·w or M1·w̄ with w = M2·ζ; conjugating m1 conjugates M2.
    auto cj = [&](Complex z) { return m1.conjugating() ? std::conj(z) : z; };
    const Complex a2 = cj(m2.a()), b2 = cj(m2.b()), c2 = cj(m2.c()), d2 = cj(m2.d());
    return {m1.a() * a2 + m1.b() * c2, m1.a() * b2 + m1.b() * d2, m1.c() * a2 + m1.d() * c2,
            m1.c() * b2 + m1.d() * d2, m1.conjugating() != m2.conjugating()};
}

MobiusMap inverse(const MobiusMap& m) {
    if (!m.conjugating()) return {m.d(), -m.b(), -m.c(), m.a(), false};
    return {std::conj(m.d()), -std::conj(m.b()), -std::conj(m.c()), std::conj(m.a()), true};
}

// ---------------------------------------------------------------------------
// HolomorphicMap

HolomorphicMap::HolomorphicMap(std::string name, Evaluator eval, std::vector<Complex> singular_points,
                               double guard)
    : name_(std::move(name)), eval_(std::move(eval)), singular_(std::move(singular_points)), guard_(guard) {}

bool HolomorphicMap::excluded(Complex z) const {
    for (const Complex& s : singular_) {
        if (std::abs(z - s) < guard_) return true;
    }
    if (extra_excluded_ && extra_excluded_(z)) return true;
    try {
        const HoloJet j = eval_(z);
        return !(std::abs(j.d1) >= guard_) || !std::isfinite(std::abs(j.f));
    } catch (const DomainError&) {
        return true;
    }
}

HoloJet HolomorphicMap::eval(Complex z) const {
    if (excluded(z)) throw DomainError("HolomorphicMap '" + name_ + "': excluded point");
    return eval_(z);
}

Jacobian HolomorphicMap::jacobian(Vec2 p) const {
    return make_jacobian(holomorphic_jacobian(eval(p.to_complex()).d1));
}

HolomorphicMap HolomorphicMap::with_extra_exclusion(ExcludedFn extra, std::string name) const {
    HolomorphicMap out = *this;
    out.name_ = std::move(name);
    if (extra_excluded_) {
        out.extra_excluded_ = [a = extra_excluded_, b = std::move(extra)](Complex z) {
            return a(z) || b(z);
        };
    } else {
        out.extra_excluded_ = std::move(extra);
    }
    return out;
}

HolomorphicMap HolomorphicMap::identity() {
    return {"identity", [](Complex z) { return HoloJet{z, 1.0, 0.0, 0.0}; }};
}

HolomorphicMap HolomorphicMap::exp() {
    return {"exp", [](Complex z) {
                const Complex e = std::exp(z);
                return HoloJet{e, e, e, e};
            }};
}

HolomorphicMap HolomorphicMap::polynomial(std::vector<Complex> coefficients) {
    while (coefficients.size() > 1 && coefficients.back() == Complex{0.0}) coefficients.pop_back();
    if (coefficients.size() < 2) {
        throw std::invalid_argument("HolomorphicMap::polynomial: constant polynomial has no univalent domain");
    }
    // Zeros of the derivative via the companion matrix of f'.
    std::vector<Complex> critical;
    const std::size_t deg = coefficients.size() - 1;
    if (deg >= 2) {
        const std::size_t n = deg - 1;  // degree of f'
        const Complex lead = static_cast<double>(deg) * coefficients[deg];
        Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            companion(k, n - 1) = -static_cast<double>(k + 1) * coefficients[k + 1] / lead;
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
            critical.push_back(solver.eigenvalues()(i));
        }
    }
    std::string name = "polynomial(deg " + std::to_string(deg) + ")";
    return {std::move(name),
            [c = std::move(coefficients)](Complex z) {
                HoloJet j{0.0, 0.0, 0.0, 0.0};
                // Horner on value and the first three derivatives together.
                for (std::size_t k = c.size(); k-- > 0;) {
                    j.d3 = j.d3 * z + 3.0 * j.d2;
                    j.d2 = j.d2 * z + 2.0 * j.d1;
                    j.d1 = j.d1 * z + j.f;
                    j.f = j.f * z + c[k];
                }
                return j;
            },
            std::move(critical)};
}

HolomorphicMap HolomorphicMap::mobius(const MobiusMap& m) {
    if (m.conjugating()) {
        throw std::invalid_argument("HolomorphicMap::mobius: conjugating maps are not holomorphic");
    }
    std::vector<Complex> singular;
    if (auto p = m.pole()) singular.push_back(p->to_complex());
    return {"mobius",
            [m](Complex z) {
                const Vec2 p = Vec2::from_complex(z);
                const auto d = m.holomorphic_derivatives(p);
                return HoloJet{m.apply(p).to_complex(), d.d1, d.d2, d.d3};
            },
            std::move(singular)};
}

HolomorphicMap compose(const HolomorphicMap& psi1, const HolomorphicMap& psi2) {
    auto eval = [psi1, psi2](Complex z) {
        const HoloJet g = psi2.eval(z);
        const HoloJet f = psi1.eval(g.f);
        const Complex g1 = g.d1, g2 = g.d2, g3 = g.d3;
        return HoloJet{f.f, f.d1 * g1, f.d2 * g1 * g1 + f.d1 * g2,
                       f.d3 * g1 * g1 * g1 + 3.0 * f.d2 * g1 * g2 + f.d1 * g3};
    };
    HolomorphicMap out(psi1.name() + "∘" + psi2.name(), std::move(eval), psi2.singular_points(), psi2.guard());
    return out.with_extra_exclusion(
        [psi1, psi2](Complex z) {
            if (psi2.excluded(z)) return true;
            return psi1.excluded(psi2.eval(z).f);
        },
        out.name());
}

}  // namespace conformal2d
