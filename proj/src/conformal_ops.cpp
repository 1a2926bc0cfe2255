#include "conformal2d/conformal_ops.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "conformal2d/errors.hpp"

namespace conformal2d {

namespace {

void check_jet(const Jet2& j) {
    if (!j.finite()) throw DomainError("operator: non-finite jet");
    if (std::abs(j.value) > kExpOverflowGuard) throw DomainError("operator: |u| > 700, e^{-u} would overflow");
}

}  // namespace

Sym2 a_from_jet(const Jet2& j) {
    check_jet(j);
    const Vec2& g = j.gradient;
    const Sym2 inner = -j.hessian + Sym2::outer(g) * 0.5 - Sym2::identity() * (0.25 * g.norm2());
    return inner * std::exp(-j.value);
}

Herm2 b_from_jet(const Jet2& j) {
    check_jet(j);
    const WirtingerJet w = to_wirtinger(j);
    const double s = std::exp(-j.value);
    return {-s * w.dzzbar, s * (-w.dzz + 0.5 * w.dz * w.dz)};
}

EigenPair Herm2::eigenvalues() const {
    const double m = std::abs(bzz);
    return {bzzbar + m, bzzbar - m};
}

EigenPair lambda_a(const ScalarField& u, Vec2 x) { return eig2(a_from_jet(u.jet(x))); }

// ---------------------------------------------------------------------------

ConeIndex::ConeIndex(double p) : p_(p) {
    if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("ConeIndex: p must lie in (1, 2]");
}

ConeMembership in_cone(double lambda1, double lambda2, const ConeIndex& cone) {
    const double q = cone.p() - 2.0;
    const double margin = std::min(lambda2 - q * lambda1, lambda1 - q * lambda2);
    return {margin > 0.0, margin};
}

ConeMembership in_cone(const EigenPair& e, const ConeIndex& cone) { return in_cone(e.lambda1, e.lambda2, cone); }

// ---------------------------------------------------------------------------

SymmetricFunction::SymmetricFunction(std::string name, ValueFn value, GradFn gradient, ConeIndex cone)
    : name_(std::move(name)), value_(std::move(value)), grad_(std::move(gradient)), cone_(cone) {}

SymmetricFunction SymmetricFunction::custom(std::string name, ValueFn value, GradFn gradient, ConeIndex cone) {
    SymmetricFunction f(std::move(name), std::move(value), std::move(gradient), cone);
    // Sample directions strictly inside the angular sector of Γ_p.
    const double edge = std::atan(cone.p() - 2.0);
    const double lo = edge, hi = 0.5 * std::numbers::pi - edge;
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> angle(lo + 0.01 * (hi - lo), hi - 0.01 * (hi - lo));
    std::uniform_real_distribution<double> log_radius(std::log(0.1), std::log(10.0));
    for (int i = 0; i < 100; ++i) {
        const double t = angle(rng), r = std::exp(log_radius(rng));
        const double l1 = r * std::cos(t), l2 = r * std::sin(t);
        const double a = f.value(l1, l2), b = f.value(l2, l1);
        if (!(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)))) {
            throw std::invalid_argument("SymmetricFunction '" + f.name() + "': not symmetric");
        }
        const Vec2 g = f.gradient(l1, l2);
        if (!(g.x1 > 0.0 && g.x2 > 0.0)) {
            throw std::invalid_argument("SymmetricFunction '" + f.name() + "': not elliptic on its cone");
        }
    }
    return f;
}

SymmetricFunction SymmetricFunction::sigma1(ConeIndex cone) {
    return {"sigma1", [](double a, double b) { return a + b; }, [](double, double) { return Vec2{1.0, 1.0}; },
            cone};
}

SymmetricFunction SymmetricFunction::sigma2() {
    return {"sigma2", [](double a, double b) { return a * b; }, [](double a, double b) { return Vec2{b, a}; },
            ConeIndex(2.0)};
}

SymmetricFunction SymmetricFunction::weighted(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("weighted: t must lie in [0, 1]");
    auto value = [t](double a, double b) { return t * (a + b) + (1.0 - t) * std::sqrt(a * b); };
    auto grad = [t](double a, double b) {
        const double s = std::sqrt(a * b);
        return Vec2{t + (1.0 - t) * 0.5 * b / s, t + (1.0 - t) * 0.5 * a / s};
    };
    return custom("weighted:" + std::to_string(t), value, grad, ConeIndex(2.0));
}

SymmetricFunction SymmetricFunction::with_cone(ConeIndex cone) const {
    SymmetricFunction out = *this;
    out.cone_ = cone;
    return out;
}

FEval f_eval(const SymmetricFunction& f, const EigenPair& e) {
    if (!in_cone(e, f.cone()).inside) {
        throw ConeError("f_eval: eigenvalues outside the cone of '" + f.name() + "'");
    }
    FEval out;
    out.value = f.value(e.lambda1, e.lambda2);
    out.grad = f.gradient(e.lambda1, e.lambda2);
    out.elliptic = out.grad.x1 > 0.0 && out.grad.x2 > 0.0;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

std::map<std::string, FunctionFactory>& registry() {
    static std::map<std::string, FunctionFactory> r;
    return r;
}

}  // namespace

void register_function(const std::string& name, FunctionFactory factory) {
    std::lock_guard lock(registry_mutex());
    registry()[name] = std::move(factory);
}

SymmetricFunction function_by_name(const std::string& name, ConeIndex cone) {
    if (name == "sigma1") return SymmetricFunction::sigma1(cone);
    if (name == "sigma2") return SymmetricFunction::sigma2();
    const std::string prefix = "weighted:";
    if (name.rfind(prefix, 0) == 0) {
        try {
            std::size_t used = 0;
            const std::string arg = name.substr(prefix.size());
            const double t = std::stod(arg, &used);
            if (used != arg.size()) throw std::invalid_argument("trailing characters");
            return SymmetricFunction::weighted(t);
        } catch (const std::exception& e) {
            throw ConfigError("function '" + name + "': " + e.what());
        }
    }
    std::lock_guard lock(registry_mutex());
    auto it = registry().find(name);
    if (it == registry().end()) throw ConfigError("unknown curvature function '" + name + "'");
    return it->second(cone);
}

}  // namespace conformal2d
