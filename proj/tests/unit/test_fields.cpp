#include <doctest.h>

#include <numbers>

#include "conformal2d/errors.hpp"
#include "conformal2d/fields.hpp"
#include "conformal2d/sampling.hpp"
#include "oracles.hpp"

using namespace conformal2d;

namespace {

double jet_distance(const Jet2& a, const Jet2& b) {
    return std::max({std::abs(a.value - b.value), (a.gradient - b.gradient).norm(), max_abs_diff(a.hessian, b.hessian)});
}

std::vector<ScalarField> closed_form_fields() {
    return {ScalarField::bubble(1.0, 8.0),
            ScalarField::bubble(0.7, 2.0, {0.5, -0.3}),
            ScalarField::chen_li(1.2, {-0.2, 0.1}),
            ScalarField::liouville(HolomorphicMap::identity()),
            ScalarField::liouville(HolomorphicMap::exp()),
            ScalarField::liouville(HolomorphicMap::polynomial({0.1, 1.0, Complex{0.1, 0.2}, 0.05})),
            ScalarField::exp_example(),
            ScalarField::quadratic(1.3),
            ScalarField::affine(0.5, {1.0, -2.0}),
            pullback(ScalarField::bubble(1.0, 3.0), MobiusMap(Complex{1.0, 0.5}, 0.2, Complex{0.0, 0.3}, 1.0)),
            pullback(ScalarField::bubble(1.0, 3.0), MobiusMap(1.0, 0.5, 0.2, 1.0, true)),
            pullback(ScalarField::chen_li(1.0), HolomorphicMap::polynomial({0.0, 0.0, 1.0}))};
}

}  // namespace

TEST_SUITE("fields") {

TEST_CASE("jet examples") {
    const Jet2 b = ScalarField::bubble(1.0, 8.0).jet({0.0, 0.0});
    CHECK(std::abs(b.value) <= 1e-15);
    CHECK(b.gradient.norm() <= 1e-15);
    CHECK(max_abs_diff(b.hessian, Sym2::identity() * -4.0) <= 1e-14);

    const double a = 0.8;
    const Jet2 q = ScalarField::quadratic(a).jet({1.5, -2.0});
    CHECK(q.value == doctest::Approx(a * 2.25));
    CHECK(q.gradient == Vec2{2 * a * 1.5, 0.0});
    CHECK(q.hessian == Sym2::diag(2 * a, 0.0));

    CHECK(std::abs(ScalarField::exp_example().value({0.0, 3.7}) - std::log(2.0)) <= 1e-15);
}

TEST_CASE("constructor argument checks") {
    CHECK_THROWS_AS(ScalarField::bubble(-1.0, 8.0), std::invalid_argument);
    CHECK_THROWS_AS(ScalarField::bubble(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ScalarField::chen_li(0.0), std::invalid_argument);
}

TEST_CASE("closed-form jets match an external finite-difference oracle") {
    Rng rng(31);
    for (const auto& u : closed_form_fields()) {
        const auto pts = sample_box(rng(), 20, {-1.5, -1.5}, {1.5, 1.5}, [&](Vec2 x) { return has_margin(u, x, 0.05); });
        for (const Vec2& x : pts) {
            const Jet2 j = u.jet(x);
            const oracle::Jet f = oracle::fd([&](double s, double t) { return u.value({s, t}); }, x.x1, x.x2, 1e-3);
            const double scale = 1.0 + std::abs(j.hessian.max_abs()) + j.gradient.norm();
            INFO(u.name() << " at (" << x.x1 << ", " << x.x2 << ")");
            CHECK(std::abs(j.gradient.x1 - f.gx) <= 1e-7 * scale);
            CHECK(std::abs(j.gradient.x2 - f.gy) <= 1e-7 * scale);
            CHECK(std::abs(j.hessian.a11 - f.hxx) <= 1e-6 * scale);
            CHECK(std::abs(j.hessian.a12 - f.hxy) <= 1e-6 * scale);
            CHECK(std::abs(j.hessian.a22 - f.hyy) <= 1e-6 * scale);
        }
    }
}

TEST_CASE("fd_jet converges at second order") {
    Rng rng(32);
    for (const auto& u : closed_form_fields()) {
        if (u.name().rfind("quadratic", 0) == 0 || u.name().rfind("affine", 0) == 0) continue;
        const auto pts = sample_box(rng(), 100, {-1.5, -1.5}, {1.5, 1.5}, [&](Vec2 x) { return has_margin(u, x, 0.1); });
        double e1 = 0.0, e2 = 0.0;
        for (const Vec2& x : pts) {
            const Jet2 j = u.jet(x);
            e1 = std::max(e1, jet_distance(fd_jet(u, x, 4e-3), j));
            e2 = std::max(e2, jet_distance(fd_jet(u, x, 2e-3), j));
        }
        const double order = std::log2(e1 / e2);
        INFO(u.name() << ": errors " << e1 << ", " << e2);
        CHECK(order >= 1.8);
        CHECK(order <= 2.2);
    }
}

TEST_CASE("fd_jet is exact on polynomials of degree two") {
    const Jet2 q = fd_jet(ScalarField::quadratic(2.0), {0.3, 0.4}, 1e-2);
    CHECK(max_abs_diff(q.hessian, Sym2::diag(4.0, 0.0)) <= 1e-9);
    const Jet2 c = fd_jet(ScalarField::constant(1.5), {0.3, 0.4});
    CHECK(c.gradient.norm() <= 1e-12);
    CHECK(c.hessian.max_abs() <= 1e-12);
}

TEST_CASE("pullback examples") {
    const auto u = ScalarField::bubble(0.5, 3.0, {0.2, 0.1});
    const auto id = pullback(u, MobiusMap::identity());
    for (Vec2 x : {Vec2{0.0, 0.0}, Vec2{1.0, -0.5}}) CHECK(jet_distance(id.jet(x), u.jet(x)) <= 1e-14);

    const double lam = 1.7, c = -0.4;
    const auto dil = pullback(ScalarField::constant(c), MobiusMap::dilation(lam));
    CHECK(std::abs(dil.value({0.3, 2.0}) - (c + 2.0 * std::log(lam))) <= 1e-14);

    const double a = 1.3;
    const auto iz2 = pullback(ScalarField::quadratic(a), HolomorphicMap::polynomial({0.0, 0.0, Complex{0.0, 1.0}}));
    for (Vec2 p : {Vec2{0.5, 0.7}, Vec2{-1.0, 0.3}, Vec2{0.0, 1.0}}) {
        const double x = p.x1, y = p.x2;
        CHECK(std::abs(iz2.value(p) - (4 * a * x * x * y * y + std::log(4.0) + std::log(x * x + y * y))) <= 1e-13);
    }
    CHECK(iz2.excluded({0.0, 0.0}));
    CHECK_THROWS_AS(iz2.jet({0.0, 0.0}), DomainError);
}

TEST_CASE("pullback of a Möbius map agrees with the external oracle") {
    Rng rng(33);
    const oracle::Fn bub = [](double x, double y) { return oracle::bubble(1.0, 2.0, 0.3, -0.2, x, y); };
    const auto u = ScalarField::bubble(1.0, 2.0, {0.3, -0.2});
    for (int i = 0; i < 30; ++i) {
        const MobiusMap m = random_mobius(rng);
        const oracle::Fn ref = oracle::pullback(bub, {m.a(), m.b(), m.c(), m.d(), m.conjugating()});
        const auto pts = sample_for_map(rng(), 5, u, m);
        const auto v = pullback(u, m);
        for (const Vec2& x : pts) {
            const Jet2 j = v.jet(x);
            CHECK(std::abs(j.value - ref(x.x1, x.x2)) <= 1e-12 * (1.0 + std::abs(j.value)));
            const oracle::Jet f = oracle::fd(ref, x.x1, x.x2, 1e-4);
            CHECK(std::abs(j.hessian.a12 - f.hxy) <= 1e-5 * (1.0 + j.hessian.max_abs()));
        }
    }
}

TEST_CASE("pullback cocycle") {
    Rng rng(34);
    const auto u = ScalarField::chen_li(0.8, {0.1, 0.2});
    for (int i = 0; i < 40; ++i) {
        const MobiusMap p1 = random_mobius(rng), p2 = random_mobius(rng);
        const auto lhs = pullback(pullback(u, p1), p2);
        const auto rhs = pullback(u, compose(p1, p2));
        const auto pts = sample_box(rng(), 10, {-2.0, -2.0}, {2.0, 2.0}, [&](Vec2 x) {
            return has_margin(lhs, x, 0.1) && has_margin(rhs, x, 0.1) && p2.apply(x).norm() < 50.0 &&
                   compose(p1, p2).apply(x).norm() < 50.0;
        });
        for (const Vec2& x : pts) {
            const Jet2 a = lhs.jet(x), b = rhs.jet(x);
            CHECK(std::abs(a.value - b.value) <= 1e-10 * (1.0 + std::abs(a.value)));
            CHECK(max_abs_diff(a.hessian, b.hessian) <= 1e-10 * (1.0 + a.hessian.max_abs()));
        }
    }
    // Holomorphic compositions use the third derivative through the chain rule.
    const auto sq = HolomorphicMap::polynomial({0.0, 0.0, 1.0});
    const auto lhs = pullback(pullback(u, HolomorphicMap::exp()), sq);
    const auto rhs = pullback(u, compose(HolomorphicMap::exp(), sq));
    for (Vec2 x : {Vec2{0.4, 0.3}, Vec2{-0.5, 0.6}, Vec2{0.8, -0.1}}) {
        CHECK(jet_distance(lhs.jet(x), rhs.jet(x)) <= 1e-10);
    }
}

TEST_CASE("Liouville fields solve −Δu = e^u") {
    Rng rng(35);
    for (const auto& f : {HolomorphicMap::identity(), HolomorphicMap::exp(),
                          HolomorphicMap::polynomial({0.0, 1.0, Complex{0.1, -0.05}, Complex{0.02, 0.03}})}) {
        const auto u = ScalarField::liouville(f);
        for (const Vec2& x : sample_box(rng(), 100, {-1.0, -1.0}, {1.0, 1.0})) {
            const Jet2 j = u.jet(x);
            CHECK(std::abs(-j.hessian.trace() - std::exp(j.value)) <= 1e-7);
        }
    }
    // f = e^z reproduces the explicit one-dimensional example.
    const auto ue = ScalarField::liouville(HolomorphicMap::exp());
    const auto ex = ScalarField::exp_example();
    for (Vec2 x : {Vec2{0.3, 0.0}, Vec2{-1.2, 2.0}}) CHECK(jet_distance(ue.jet(x), ex.jet(x)) <= 1e-13);
    // f = z is the Chen–Li solution with a = 1/√8.
    const auto uz = ScalarField::liouville(HolomorphicMap::identity());
    const auto cl = ScalarField::chen_li(1.0 / std::sqrt(8.0));
    for (Vec2 x : {Vec2{0.3, 0.1}, Vec2{-1.2, 2.0}}) CHECK(jet_distance(uz.jet(x), cl.jet(x)) <= 1e-13);
}

TEST_CASE("Chen–Li mass is 8π") {
    for (double a : {0.5, 1.0, 2.0}) {
        const auto u = ScalarField::chen_li(a, {0.4, -0.3});
        const double R = 100.0;
        const double m = exp_mass_in_disc(u, {0.4, -0.3}, R);
        CHECK(std::abs(m - oracle::chen_li_mass(a, R)) <= 1e-8 * m);
        CHECK(chen_li_tail_bound(a, R) >= 8 * std::numbers::pi - oracle::chen_li_mass(a, R));
        CHECK(std::abs(m + chen_li_tail_bound(a, R) - 8 * std::numbers::pi) <= 1e-3 * 8 * std::numbers::pi);
    }
}

TEST_CASE("radial field interpolates its profile") {
    RadialProfile p;
    p.r = linspace(0.0, 3.0, 301);
    for (double r : p.r) p.v.push_back(oracle::bubble(1.0, 8.0, 0, 0, r, 0));
    const auto u = ScalarField::radial(p, {1.0, 1.0});
    for (double r : {0.0, 0.35, 1.234, 2.9}) {
        const Vec2 x = Vec2{1.0, 1.0} + r * Vec2{std::cos(0.3), std::sin(0.3)};
        CHECK(std::abs(u.value(x) - oracle::bubble(1.0, 8.0, 0, 0, r, 0)) <= 1e-6);
    }
    const Jet2 c = u.jet({1.0, 1.0});
    CHECK(c.gradient.norm() <= 1e-12);
    CHECK(max_abs_diff(c.hessian, Sym2::identity() * -4.0) <= 1e-3);
    CHECK(u.excluded({5.0, 5.0}));
}

TEST_CASE("wirtinger round trip") {
    const Jet2 j{0.3, {1.0, -2.0}, {0.5, 0.25, -1.0}};
    const Jet2 k = from_wirtinger(to_wirtinger(j));
    CHECK(jet_distance(j, k) <= 1e-15);
    const auto w = to_wirtinger(j);
    CHECK(std::abs(w.dz - Complex{0.5, 1.0}) <= 1e-15);
    CHECK(std::abs(w.dzzbar - 0.25 * j.hessian.trace()) <= 1e-15);
}

}
