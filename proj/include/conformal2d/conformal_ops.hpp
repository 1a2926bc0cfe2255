#pragma once

#include <functional>
#include <string>

#include "conformal2d/fields.hpp"
#include "conformal2d/geometry.hpp"

namespace conformal2d {

/// Jets with |u| above this are rejected before forming e^{−u}.
inline constexpr double kExpOverflowGuard = 700.0;

/// A^u = e^{−u}(−∇²u + ½ du⊗du − ¼|∇u|² I).
/// Throws DomainError on non-finite jets or |u| > 700.
Sym2 a_from_jet(const Jet2& j);

/// B^u in dz, dz̄ coordinates. Only the independent entries are stored:
/// B_{zz̄} = B_{z̄z} (real) and B_{zz} = conj(B_{z̄z̄}).
struct Herm2 {
    double bzzbar = 0.0;
    Complex bzz;

    /// Spectrum of [[B_zz̄, B_zz], [B_z̄z̄, B_z̄z]]: B_zz̄ ± |B_zz|.
    EigenPair eigenvalues() const;
};

Herm2 b_from_jet(const Jet2& j);

/// eig2(a_from_jet(eval_jet(u, x))).
EigenPair lambda_a(const ScalarField& u, Vec2 x);

/// Index p ∈ (1, 2] of the cone Γ_p = {λ2 > (p−2)λ1, λ1 > (p−2)λ2}.
class ConeIndex {
public:
    /// Throws std::invalid_argument outside (1, 2].
    explicit ConeIndex(double p);
    double p() const { return p_; }
    /// s = 2 − p: (1, −s) lies on ∂Γ_p.
    double boundary_slope() const { return 2.0 - p_; }

private:
    double p_;
};

struct ConeMembership {
    bool inside = false;
    /// min(λ2 − (p−2)λ1, λ1 − (p−2)λ2); positive exactly when inside.
    double margin = 0.0;
};

ConeMembership in_cone(const EigenPair& e, const ConeIndex& cone);
ConeMembership in_cone(double lambda1, double lambda2, const ConeIndex& cone);

/// Symmetric curvature function f(λ1, λ2) with its gradient and admissible cone.
class SymmetricFunction {
public:
    using ValueFn = std::function<double(double, double)>;
    using GradFn = std::function<Vec2(double, double)>;

    /// Validates symmetry and ellipticity on 100 seeded cone samples; throws
    /// std::invalid_argument when either fails.
    static SymmetricFunction custom(std::string name, ValueFn value, GradFn gradient, ConeIndex cone);

    /// λ1 + λ2 on the given cone.
    static SymmetricFunction sigma1(ConeIndex cone = ConeIndex(2.0));
    /// λ1 λ2 on Γ2.
    static SymmetricFunction sigma2();
    /// t σ1 + (1 − t) σ2^{1/2} on Γ2, 0 ≤ t ≤ 1.
    static SymmetricFunction weighted(double t);

    const std::string& name() const { return name_; }
    const ConeIndex& cone() const { return cone_; }
    SymmetricFunction with_cone(ConeIndex cone) const;

    /// Raw evaluation without the cone check.
    double value(double l1, double l2) const { return value_(l1, l2); }
    Vec2 gradient(double l1, double l2) const { return grad_(l1, l2); }

private:
    SymmetricFunction(std::string name, ValueFn value, GradFn gradient, ConeIndex cone);

    std::string name_;
    ValueFn value_;
    GradFn grad_;
    ConeIndex cone_;
};

struct FEval {
    double value = 0.0;
    Vec2 grad;
    bool elliptic = false;
};

/// Throws ConeError when e is not inside f's cone.
FEval f_eval(const SymmetricFunction& f, const EigenPair& e);

/// Resolves "sigma1", "sigma2", "weighted:{t}", or a name added through
/// register_function. The cone argument applies to sigma1 and registered
/// functions; throws ConfigError for unknown names.
SymmetricFunction function_by_name(const std::string& name, ConeIndex cone = ConeIndex(2.0));

using FunctionFactory = std::function<SymmetricFunction(ConeIndex)>;
void register_function(const std::string& name, FunctionFactory factory);

}  // namespace conformal2d
