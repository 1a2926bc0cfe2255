#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "conformal2d/geometry.hpp"
#include "conformal2d/mobius.hpp"
#include "conformal2d/profile.hpp"

namespace conformal2d {

/// Second-order data (u, ∇u, ∇²u) of a scalar field at a point.
struct Jet2 {
    double value = 0.0;
    Vec2 gradient;
    Sym2 hessian;

    bool finite() const { return std::isfinite(value) && gradient.finite() && hessian.finite(); }
};

/// The same jet in complex coordinates: u, u_z, u_zz, u_zz̄.
struct WirtingerJet {
    double value = 0.0;
    Complex dz;
    Complex dzz;
    double dzzbar = 0.0;
};

WirtingerJet to_wirtinger(const Jet2& j);
Jet2 from_wirtinger(const WirtingerJet& w);

/// A conformal-factor field u with exact jets on its domain.
///
/// Fields are immutable values sharing their evaluator; copying is cheap and
/// evaluation is reentrant.
class ScalarField {
public:
    using JetFn = std::function<Jet2(Vec2)>;
    using ExcludedFn = std::function<bool(Vec2)>;

    ScalarField(std::string name, JetFn jet, ExcludedFn excluded = {});

    const std::string& name() const { return name_; }
    bool excluded(Vec2 x) const;
    /// Throws DomainError at excluded points.
    Jet2 jet(Vec2 x) const;
    double value(Vec2 x) const { return jet(x).value; }

    // Closed-form families.
    /// u = 2 ln(8a / (8|x − x0|² + b)).
    static ScalarField bubble(double a, double b, Vec2 center = {});
    /// u = 2 ln(8a / (8a² + |x − x0|²)), the finite-mass solutions of −Δu = e^u.
    static ScalarField chen_li(double a, Vec2 center = {});
    /// u = ln(8|f'|² / (1 + |f|²)²) for a locally univalent f.
    static ScalarField liouville(HolomorphicMap f);
    /// u = ln(8 e^{2x1} (1 + e^{2x1})^{-2}), the f = e^z member of the Liouville family.
    static ScalarField exp_example();
    /// u = a x1².
    static ScalarField quadratic(double a);
    static ScalarField constant(double c);
    /// u = c + g·x.
    static ScalarField affine(double c, Vec2 g);
    /// u(x) = v(|x − center|), cubic-spline interpolated.
    static ScalarField radial(const RadialProfile& profile, Vec2 center = {});

private:
    std::string name_;
    std::shared_ptr<const JetFn> jet_;
    std::shared_ptr<const ExcludedFn> excluded_;
};

Jet2 eval_jet(const ScalarField& u, Vec2 x);

/// u_ψ = u∘ψ + ln|J_ψ| for a holomorphic ψ.
ScalarField pullback(const ScalarField& u, const HolomorphicMap& psi);
/// u_ψ = u∘ψ + ln|det J_ψ|; conjugating maps are handled through the reflection z ↦ z̄.
ScalarField pullback(const ScalarField& u, const MobiusMap& psi);

/// Central finite-difference jet from the value channel only. With
/// `richardson`, combines steps h and h/2 to cancel the O(h²) term.
/// Throws DomainError if any stencil point is excluded.
Jet2 fd_jet(const ScalarField& u, Vec2 x, double h, bool richardson = false);
/// Default step 1e-4·(1 + |x|).
Jet2 fd_jet(const ScalarField& u, Vec2 x);

/// ∫_{B_R(center)} e^u dx by adaptive Gauss–Kronrod in r and the periodic
/// trapezoid rule in θ.
double exp_mass_in_disc(const ScalarField& u, Vec2 center, double radius, int angular_points = 64);

/// Closed-form bound on ∫_{|x−x0|>R} e^u for the Chen–Li solution:
/// 64πa²/R² ≥ the exact tail 64πa²/(8a² + R²).
double chen_li_tail_bound(double a, double radius);

}  // namespace conformal2d
