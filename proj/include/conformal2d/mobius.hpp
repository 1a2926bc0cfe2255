#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conformal2d/geometry.hpp"

namespace conformal2d {

/// Real differential of a plane map at a point together with its conformal
/// decomposition J = conf^{1/2} · o.
struct Jacobian {
    Mat2 j;
    double det = 0.0;   ///< det J; negative exactly for orientation-reversing maps
    double conf = 0.0;  ///< |det J|
    Orthogonal2 o;      ///< conf^{-1/2} J
};

/// Plane Möbius transformation z ↦ (az + b)/(cz + d), or with z̄ in place of z
/// when `conjugating` is set. Coefficients are stored normalized to ad − bc = 1.
class MobiusMap {
public:
    static constexpr double kPoleGuard = 1e-14;

    /// Identity map.
    MobiusMap() = default;
    /// Throws std::invalid_argument when ad − bc vanishes.
    MobiusMap(Complex a, Complex b, Complex c, Complex d, bool conjugating = false);

    static MobiusMap identity() { return {}; }
    static MobiusMap translation(Vec2 t);
    /// x ↦ λx for real λ ≠ 0.
    static MobiusMap dilation(double lambda);
    static MobiusMap rotation(double theta);
    /// Reflection across the x1-axis, z ↦ z̄.
    static MobiusMap reflection();
    /// The generator x ↦ x/|x|², i.e. z ↦ 1/z̄.
    static MobiusMap inversion();
    /// Sphere inversion y ↦ x + λ²(y − x)/|y − x|².
    static MobiusMap sphere_inversion(Vec2 center, double lambda);

    Complex a() const { return a_; }
    Complex b() const { return b_; }
    Complex c() const { return c_; }
    Complex d() const { return d_; }
    bool conjugating() const { return conjugating_; }

    /// Point sent to infinity, if any.
    std::optional<Vec2> pole() const;
    bool near_pole(Vec2 p) const;

    /// Throws PoleError when |cz + d| < kPoleGuard.
    Vec2 apply(Vec2 p) const;

    /// Holomorphic part g with ψ(z) = g(z) or g(z̄): returns (g', g'', g''')
    /// at the (possibly conjugated) argument.
    struct Derivatives {
        Complex d1, d2, d3;
    };
    Derivatives holomorphic_derivatives(Vec2 p) const;

private:
    Complex a_{1.0}, b_{0.0}, c_{0.0}, d_{1.0};
    bool conjugating_ = false;

    Complex argument(Vec2 p) const;
    Complex denominator(Vec2 p) const;
};

/// J, det J, |det J|, and the orthogonal factor of a Möbius map at p.
Jacobian jacobian(const MobiusMap& m, Vec2 p);

/// m1 ∘ m2.
MobiusMap compose(const MobiusMap& m1, const MobiusMap& m2);

MobiusMap inverse(const MobiusMap& m);

/// Value and first three complex derivatives of a holomorphic map at a point.
struct HoloJet {
    Complex f, d1, d2, d3;
};

/// A holomorphic (meromorphic) map of the plane given by its jets, with the
/// points where it is not locally univalent or not finite declared up front.
/// A point is excluded when it lies within `guard` of a singular point or
/// when |ψ'| falls below `guard`.
class HolomorphicMap {
public:
    using Evaluator = std::function<HoloJet(Complex)>;
    static constexpr double kDefaultGuard = 1e-6;

    HolomorphicMap(std::string name, Evaluator eval, std::vector<Complex> singular_points = {},
                   double guard = kDefaultGuard);

    static HolomorphicMap identity();
    /// Σ c_k z^k; zeros of the derivative are located numerically and excluded.
    static HolomorphicMap polynomial(std::vector<Complex> coefficients);
    static HolomorphicMap exp();
    /// A non-conjugating Möbius map; throws std::invalid_argument otherwise.
    static HolomorphicMap mobius(const MobiusMap& m);

    const std::string& name() const { return name_; }
    const std::vector<Complex>& singular_points() const { return singular_; }
    double guard() const { return guard_; }

    bool excluded(Complex z) const;
    /// Throws DomainError at excluded points.
    HoloJet eval(Complex z) const;
    Vec2 apply(Vec2 p) const { return Vec2::from_complex(eval(p.to_complex()).f); }

    /// Real Jacobian [[Re ψ', −Im ψ'], [Im ψ', Re ψ']] and its conformal split.
    Jacobian jacobian(Vec2 p) const;

    /// Preimage-side exclusion used by compositions.
    using ExcludedFn = std::function<bool(Complex)>;
    HolomorphicMap with_extra_exclusion(ExcludedFn extra, std::string name) const;

private:
    std::string name_;
    Evaluator eval_;
    std::vector<Complex> singular_;
    double guard_;
    ExcludedFn extra_excluded_;
};

/// ψ1 ∘ ψ2, with jets by the chain rule up to third order.
HolomorphicMap compose(const HolomorphicMap& psi1, const HolomorphicMap& psi2);

}  // namespace conformal2d
