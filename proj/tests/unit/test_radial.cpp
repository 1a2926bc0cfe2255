#include <doctest.h>

#include <functional>

#include "conformal2d/errors.hpp"
#include "conformal2d/radial.hpp"
#include "oracles.hpp"

using namespace conformal2d;

namespace {

RadialProfile sampled(const std::vector<double>& r, const std::function<double(double)>& v) {
    RadialProfile p;
    p.r = r;
    for (double x : r) p.v.push_back(v(x));
    return p;
}

double bubble_v(double a, double b, double r) { return 2 * std::log(8 * a / (8 * r * r + b)); }

}  // namespace

TEST_SUITE("radial") {

TEST_CASE("profile validation and spline") {
    RadialProfile bad;
    bad.r = {0.0, 0.0, 1.0};
    bad.v = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.r = {-1.0, 0.0};
    bad.v = {0.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    const auto x = linspace(0.0, 2.0, 201);
    std::vector<double> y;
    for (double t : x) y.push_back(std::sin(t));
    const CubicSpline s(x, y);
    CHECK(std::abs(s(1.234).value - std::sin(1.234)) <= 1e-7);
    CHECK(std::abs(s(1.234).d1 - std::cos(1.234)) <= 1e-5);
    CHECK_THROWS_AS(s(2.5), std::out_of_range);
}

TEST_CASE("minimize_on_circles examples") {
    const auto radii = linspace(0.1, 3.0, 30);
    const auto lin = minimize_on_circles(ScalarField::affine(0.0, {1.0, 0.0}), {}, radii);
    for (std::size_t i = 0; i < radii.size(); ++i) CHECK(std::abs(lin.v[i] + radii[i]) <= 1e-12);

    const auto own = minimize_on_circles(ScalarField::bubble(1.0, 8.0, {0.5, 0.5}), {0.5, 0.5}, radii);
    for (std::size_t i = 0; i < radii.size(); ++i) CHECK(std::abs(own.v[i] - bubble_v(1.0, 8.0, radii[i])) <= 1e-12);

    const Vec2 c{0.6, -0.8};
    const auto off = minimize_on_circles(ScalarField::bubble(1.0, 2.0, c), {}, radii, 16);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        CHECK(std::abs(off.v[i] - bubble_v(1.0, 2.0, radii[i] + c.norm())) <= 1e-10);
    }
}

TEST_CASE("envelope examples") {
    const auto grid = linspace(0.0, 4.0, 401);
    const double dr = grid[1] - grid[0];
    const auto c = inf_envelope(sampled(grid, [](double) { return 1.5; }), 0.3);
    for (double v : c.profile.v) CHECK(v == 1.5);
    CHECK(c.semiconcavity_defect == 0.0);

    // Closed-form inf-convolution of r² with |·|²/ε is r²/(1 + ε).
    for (double eps : {0.5, 1.0, 2.0}) {
        const auto q = inf_envelope(sampled(grid, [](double r) { return r * r; }), eps);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(std::abs(q.profile.v[i] - grid[i] * grid[i] / (1 + eps)) <= 4 * dr * dr);
        }
    }

    // Moreau smoothing of |r − 2|: d²/ε within ε/2 of the kink, d − ε/4 beyond it.
    const double eps = 0.2;
    const auto k = inf_envelope(sampled(grid, [](double r) { return std::abs(r - 2.0); }), eps);
    for (std::size_t i = k.interior_begin; i < k.interior_end; ++i) {
        const double d = std::abs(grid[i] - 2.0);
        const double ref = d <= eps / 2 ? d * d / eps : d - eps / 4;
        CHECK(std::abs(k.profile.v[i] - ref) <= 2 * dr * dr / eps);
    }
    CHECK(k.semiconcavity_defect <= 1e-9);
    CHECK_THROWS_AS(inf_envelope(sampled(grid, [](double r) { return r; }), 0.0), std::invalid_argument);
}

TEST_CASE("envelope order, monotonicity in ε, and convergence") {
    const auto grid = linspace(0.0, 5.0, 501);
    const std::vector<std::pair<std::function<double(double)>, double>> profiles{
        {[](double r) { return std::cos(2 * r); }, 2.0},
        {[](double r) { return std::abs(r - 1.0) - std::abs(r - 3.0); }, 2.0},
        {[](double r) { return bubble_v(1.0, 8.0, r); }, 2.0},
    };
    for (const auto& [f, L] : profiles) {
        const auto p = sampled(grid, f);
        std::vector<double> prev = p.v;
        for (double eps : {0.01, 0.1, 0.5}) {
            const auto e = inf_envelope(p, eps);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                CHECK(e.profile.v[i] <= p.v[i] + 1e-12);
                CHECK(e.profile.v[i] <= prev[i] + 1e-12);
            }
            CHECK(e.semiconcavity_defect <= 1e-9);
            CHECK(e.sup_distance_to_input <= L * L * eps);
            CHECK(e.interior_begin <= e.interior_end);
            prev = e.profile.v;
        }
    }
}

TEST_CASE("radial_lambda examples") {
    for (double r : {0.3, 1.0, 2.5}) {
        const double v = -4 * std::log(r);
        const auto l = radial_lambda(v, -4 / r, 4 / (r * r), r);
        CHECK(std::abs(l.lambda1) <= 1e-14);
        CHECK(std::abs(l.lambda2) <= 1e-14);
    }
    // Bubble(1, 8): v' = −32r/(8r² + 8), v'' from differentiating again.
    const double a = 1.0, b = 8.0, kappa = b / (2 * a * a);
    for (double r : {0.2, 1.0, 3.0}) {
        const double den = 8 * r * r + b;
        const double v1 = -32 * r / den, v2 = -32 / den + 512 * r * r / (den * den);
        const auto l = radial_lambda(bubble_v(a, b, r), v1, v2, r);
        CHECK(std::abs(l.lambda1 - kappa) <= 1e-10);
        CHECK(std::abs(l.lambda2 - kappa) <= 1e-10);
        const auto e = lambda_a(ScalarField::bubble(a, b), {r, 0.0});
        CHECK(std::abs(l.lambda1 - e.lambda1) <= 1e-10);
    }
    // v = ln 8 − 2 ln(1 + r²) at r = 0: v'' = −4.
    const auto z = radial_lambda(std::log(8.0), 0.0, -4.0, 0.0);
    CHECK(std::abs(z.lambda1 - 0.5) <= 1e-15);
    CHECK(std::abs(z.lambda2 - 0.5) <= 1e-15);
    CHECK_THROWS_AS(radial_lambda(0.0, 1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(radial_lambda(0.0, 0.0, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("radial_lambda agrees with the 2D pipeline on a spline field") {
    RadialProfile p;
    p.r = linspace(0.0, 3.0, 3001);
    auto v = [](double r) { return std::log(8.0) - 2 * std::log(1 + r * r) + 0.1 * std::cos(r); };
    for (double r : p.r) p.v.push_back(v(r));
    const auto u = ScalarField::radial(p);
    for (double r : {0.5, 1.0, 2.0}) {
        const double v1 = -4 * r / (1 + r * r) - 0.1 * std::sin(r);
        const double v2 = -4 * (1 - r * r) / ((1 + r * r) * (1 + r * r)) - 0.1 * std::cos(r);
        const auto l = radial_lambda(v(r), v1, v2, r);
        const auto e = lambda_a(u, {r * std::cos(0.4), r * std::sin(0.4)});
        CHECK(std::abs(std::max(l.lambda1, l.lambda2) - e.lambda1) <= 1e-6);
        CHECK(std::abs(std::min(l.lambda1, l.lambda2) - e.lambda2) <= 1e-6);
    }
}

TEST_CASE("monotonicity of v + 4 ln r") {
    const auto grid = linspace(0.05, 30.0, 3000);
    const auto b = check_monotone_4log(sampled(grid, [](double r) { return bubble_v(1.0, 8.0, r); }), 0.0);
    CHECK(b.pass);
    const auto f = check_monotone_4log(sampled(grid, [](double r) { return -4 * std::log(r); }), 0.0);
    CHECK(f.pass);
    CHECK(std::abs(f.details.at("min_increment")) <= 1e-12);
    const auto s = check_monotone_4log(sampled(grid, [](double r) { return -5 * std::log(r); }), 0.0);
    CHECK_FALSE(s.pass);
    for (double r : grid) CHECK(radial_lambda(-5 * std::log(r), -5 / r, 5 / (r * r), r).lambda2 < 0.0);
    // A dip below r = 1 is ignored once k0 passes it.
    const auto dip = sampled(grid, [](double r) { return -4 * std::log(r) + (r < 1.0 ? -r : -1.0); });
    CHECK_FALSE(check_monotone_4log(dip, 0.0).pass);
    const auto late = check_monotone_4log(dip, 1.0);
    CHECK(late.pass);
    CHECK(late.details.at("empirical_k0") <= 1.0 + 0.02);
}

TEST_CASE("diagonal seed and λ1 root") {
    CHECK(std::abs(diagonal_seed(SymmetricFunction::sigma2()) - 1.0) <= 1e-12);
    CHECK(std::abs(diagonal_seed(SymmetricFunction::sigma1()) - 0.5) <= 1e-12);
    const auto r = solve_lambda1(SymmetricFunction::sigma2(), 4.0);
    REQUIRE(r.has_value());
    CHECK(std::abs(*r - 0.25) <= 1e-12);
    CHECK_FALSE(solve_lambda1(SymmetricFunction::sigma2(), -1.0).has_value());
    // σ1 on Γ_1.5: the root λ1 = 1 − λ2 lies below λ2 here.
    const auto s = solve_lambda1(SymmetricFunction::sigma1(ConeIndex(1.5)), 0.8);
    REQUIRE(s.has_value());
    CHECK(std::abs(*s - 0.2) <= 1e-12);
    const auto neg = SymmetricFunction::custom(
        "neg", [](double a, double b) { return a + b - 5.0; }, [](double, double) { return Vec2{1.0, 1.0}; },
        ConeIndex(2.0));
    CHECK(std::abs(diagonal_seed(neg) - 3.0) <= 1e-12);
}

TEST_CASE("ODE reproduces κ-normalized bubbles") {
    // σ2 = κ² = 1 needs b = 2a²; σ1 = 2κ = 1 needs b = a².
    struct Case {
        SymmetricFunction f;
        double a, b;
    };
    for (const Case& c : {Case{SymmetricFunction::sigma2(), 1.0, 2.0}, Case{SymmetricFunction::sigma1(), 1.0, 1.0},
                          Case{SymmetricFunction::sigma2(), 0.5, 0.5}}) {
        const auto sol = ode_solve(c.f, ConeIndex(2.0), 2 * std::log(8 * c.a / c.b), 5.0);
        CHECK_FALSE(sol.cone_exit);
        CHECK(sol.profile.r.back() == doctest::Approx(5.0));
        CHECK(sol.max_residual() <= 1e-9);
        double err = 0.0;
        for (std::size_t i = 0; i < sol.profile.size(); ++i) {
            err = std::max(err, std::abs(sol.profile.v[i] - bubble_v(c.a, c.b, sol.profile.r[i])));
        }
        CHECK(err <= 1e-5);
    }
}

TEST_CASE("perturbed start: cone exit xor clean solve") {
    for (double dv : {1.0, -1.0, 0.3}) {
        const auto s = ode_solve(SymmetricFunction::sigma2(), ConeIndex(2.0), 2 * std::log(4.0) + dv, 5.0);
        const bool exit = s.cone_exit.has_value();
        const bool clean = !exit && !s.blowup && s.max_residual() <= 1e-9;
        CHECK(exit != clean);
        if (!exit) CHECK(s.max_residual() <= 1e-9);
    }
}

TEST_CASE("ode_solve_from leaves the cone for a steep start") {
    const auto s = ode_solve_from(SymmetricFunction::sigma1(ConeIndex(1.5)), ConeIndex(1.5), 1.0, 0.0, -4.5, 20.0);
    REQUIRE(s.cone_exit.has_value());
    CHECK(*s.cone_exit > 1.0);
    CHECK(s.max_residual() <= 1e-9);
    CHECK_THROWS_AS(ode_solve(SymmetricFunction::sigma1(), ConeIndex(2.0), 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("cone-boundary solutions and the Ẽ diagnostics") {
    const ConeIndex cone(1.5);
    const double s = cone.boundary_slope();
    const double r0 = 1.0, v0 = 0.0, dv0 = -6.0;  // v' < −4/r, so the start lies in Ẽ
    const auto sol = solve_cone_boundary(cone, r0, v0, dv0, 50.0);
    CHECK(sol.max_residual() <= 1e-9);
    for (std::size_t i = 0; i < sol.profile.size(); ++i) CHECK(sol.lambda2[i] < 0.0);

    // k is constant along boundary solutions, so g = r^{1/s}(1/v'0 + r0/4) r0^{−1/s}; blowup where g = r/4.
    const double k0 = std::pow(r0, -1 / s) * (1 / dv0 + r0 / 4);
    const double r_star = std::pow(4 * k0, -s / (1 - s));
    REQUIRE(sol.blowup.has_value());
    CHECK(std::abs(*sol.blowup - r_star) <= 1e-3 * r_star);

    const auto d = etilde_diagnostics(sol.profile, cone);
    REQUIRE(!d.r.empty());
    CHECK(d.g_positive);
    CHECK(d.g_increasing);
    CHECK(d.k_nondecreasing);
    CHECK(d.k_spread <= 1e-6);
    CHECK_THROWS_AS(etilde_diagnostics(sol.profile, ConeIndex(2.0)), std::invalid_argument);
}

}
