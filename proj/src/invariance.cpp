#include "conformal2d/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conformal2d/errors.hpp"

namespace conformal2d {

void CheckReport::record(Vec2 point, double error) {
    ++points_tested;
    if (!(error <= max_error)) max_error = std::isnan(error) ? INFINITY : error;
    witnesses.push_back({point, error});
    std::stable_sort(witnesses.begin(), witnesses.end(),
                     [](const Witness& a, const Witness& b) { return a.error > b.error; });
    if (witnesses.size() > 5) witnesses.resize(5);
}

void CheckReport::finalize() { pass = max_error <= tolerance; }

void CheckReport::merge(const CheckReport& other) {
    points_tested += other.points_tested;
    max_error = std::max(max_error, other.max_error);
    witnesses.insert(witnesses.end(), other.witnesses.begin(), other.witnesses.end());
    std::stable_sort(witnesses.begin(), witnesses.end(),
                     [](const Witness& a, const Witness& b) { return a.error > b.error; });
    if (witnesses.size() > 5) witnesses.resize(5);
    for (const auto& [k, v] : other.details) {
        auto [it, fresh] = details.emplace(k, v);
        if (!fresh) it->second = std::max(it->second, v);
    }
    finalize();
}

namespace {

double eigen_distance(const EigenPair& a, const EigenPair& b) {
    return std::max(std::abs(a.lambda1 - b.lambda1), std::abs(a.lambda2 - b.lambda2));
}

/// Shared body of the A-covariance checks; `image` and `jac` describe ψ at x.
template <class Image, class Jac>
CheckReport a_covariance(std::string name, const ScalarField& u, const ScalarField& v, Image image, Jac jac,
                         std::span<const Vec2> pts, double tol) {
    CheckReport rep;
    rep.name = std::move(name);
    rep.tolerance = tol;
    double e_conj = 0.0, e_tensor = 0.0, e_eig = 0.0;
    for (const Vec2& x : pts) {
        const Jet2 jv = v.jet(x);
        const Sym2 av = a_from_jet(jv);
        const Vec2 y = image(x);
        const Jet2 ju = u.jet(y);
        const Sym2 au = a_from_jet(ju);
        const Jacobian J = jac(x);

        const double c = max_abs_diff(av, conj_orth(au, J.o));
        const Sym2 t_rhs = congruence(au, J.j) * std::exp(ju.value);
        const double t = max_abs_diff(av * std::exp(jv.value), t_rhs) / std::max(1.0, t_rhs.max_abs());
        const double e = eigen_distance(eig2(av), eig2(au));

        e_conj = std::max(e_conj, c);
        e_tensor = std::max(e_tensor, t);
        e_eig = std::max(e_eig, e);
        rep.record(x, std::max({c, t, e}));
    }
    rep.details["a_conjugation"] = e_conj;
    rep.details["tensor_identity"] = e_tensor;
    rep.details["eigenvalues"] = e_eig;
    rep.finalize();
    return rep;
}

}  // namespace

CheckReport check_a_covariance(const ScalarField& u, const MobiusMap& m, std::span<const Vec2> pts, double tol) {
    return a_covariance(
        "a_covariance", u, pullback(u, m), [&](Vec2 x) { return m.apply(x); },
        [&](Vec2 x) { return jacobian(m, x); }, pts, tol);
}

CheckReport check_a_covariance_general(const ScalarField& u, const HolomorphicMap& psi,
                                       std::span<const Vec2> pts, double tol) {
    return a_covariance(
        "a_covariance[" + psi.name() + "]", u, pullback(u, psi), [&](Vec2 x) { return psi.apply(x); },
        [&](Vec2 x) { return psi.jacobian(x); }, pts, tol);
}

CheckReport check_trace_conformal(const ScalarField& u, const HolomorphicMap& psi, std::span<const Vec2> pts,
                                  double tol) {
    CheckReport rep;
    rep.name = "trace_conformal[" + psi.name() + "]";
    rep.tolerance = tol;
    const ScalarField v = pullback(u, psi);
    for (const Vec2& x : pts) {
        const double lhs = a_from_jet(v.jet(x)).trace();
        const double rhs = a_from_jet(u.jet(psi.apply(x))).trace();
        rep.record(x, std::abs(lhs - rhs));
    }
    rep.finalize();
    return rep;
}

Herm2 unitary_conj(const Herm2& b, Complex u22) { return {b.bzzbar, b.bzz * u22}; }

CheckReport check_b_covariance(const ScalarField& u, const MobiusMap& m, std::span<const Vec2> pts, double tol) {
    if (m.conjugating()) throw ConjugatingUnsupported("check_b_covariance: map is anti-holomorphic");
    CheckReport rep;
    rep.name = "b_covariance";
    rep.tolerance = tol;
    const ScalarField v = pullback(u, m);
    for (const Vec2& x : pts) {
        const Herm2 bv = b_from_jet(v.jet(x));
        const Herm2 bu = b_from_jet(u.jet(m.apply(x)));
        const Complex d1 = m.holomorphic_derivatives(x).d1;
        const Herm2 rhs = unitary_conj(bu, d1 / std::conj(d1));
        rep.record(x, std::max(std::abs(bv.bzzbar - rhs.bzzbar), std::abs(bv.bzz - rhs.bzz)));
    }
    rep.finalize();
    return rep;
}

CounterexampleResult counterexample_iz2(double a, double y) {
    if (y == 0.0 || !std::isfinite(y)) throw std::invalid_argument("counterexample_iz2: y must be nonzero");
    const HolomorphicMap psi = HolomorphicMap::polynomial({0.0, 0.0, Complex{0.0, 1.0}});
    const ScalarField u = ScalarField::quadratic(a);
    const Vec2 x{0.0, y};

    CounterexampleResult out;
    out.a = a;
    out.y = y;
    out.lhs = a_from_jet(pullback(u, psi).jet(x));
    out.rhs = a_from_jet(u.jet(psi.apply(x)));
    const double tr_l = out.lhs.trace(), tr_r = out.rhs.trace();
    out.trace_match = std::abs(tr_l - tr_r) <= 1e-10 * std::max(1.0, std::abs(tr_r));
    out.eigen_gap = eigen_distance(eig2(out.lhs), eig2(out.rhs));
    out.conjugation_error = max_abs_diff(out.lhs, conj_orth(out.rhs, psi.jacobian(x).o));
    return out;
}

}  // namespace conformal2d
