#include "conformal2d/suites.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "conformal2d/conformal_ops.hpp"
#include "conformal2d/errors.hpp"
#include "conformal2d/moving_spheres.hpp"
#include "conformal2d/radial.hpp"
#include "conformal2d/sampling.hpp"

namespace conformal2d {

double bubble_kappa(double a, double b) { return b / (2.0 * a * a); }

std::vector<ScalarField> covariance_fields() {
    const MobiusMap twist({1.0, 0.5}, 0.2, {0.0, 0.3}, 1.0);
    return {
        ScalarField::bubble(1.0, 8.0),
        ScalarField::bubble(0.5, 2.0, {0.3, -0.4}),
        ScalarField::bubble(2.0, 5.0, {-1.0, 0.5}),
        ScalarField::chen_li(1.0),
        ScalarField::chen_li(0.7, {0.5, 0.5}),
        ScalarField::liouville(HolomorphicMap::identity()),
        ScalarField::liouville(HolomorphicMap::polynomial({{0.2, 0.1}, 1.0, {0.3, -0.2}, {0.0, 0.1}})),
        ScalarField::liouville(HolomorphicMap::polynomial({0.0, 1.0, 0.5})),
        pullback(ScalarField::bubble(1.0, 2.0), twist),
        pullback(ScalarField::liouville(HolomorphicMap::identity()), MobiusMap::inversion()),
    };
}

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::seed_seq seq{seed, a, b};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (std::uint64_t{out[0]} << 32) | out[1];
}

CheckReport make(std::string name, double tol) {
    CheckReport r;
    r.name = std::move(name);
    r.tolerance = tol;
    return r;
}

/// A report whose only sample is `error`.
CheckReport single(std::string name, double error, double tol, std::map<std::string, double> details = {}) {
    CheckReport r = make(std::move(name), tol);
    r.record({}, error);
    r.details = std::move(details);
    r.finalize();
    return r;
}

std::vector<CheckReport> covariance(const SuiteOptions& o) {
    const double tol = o.tol.value_or(1e-8);
    const auto fields = covariance_fields();
    Rng rng(o.seed);
    std::vector<MobiusMap> maps;
    for (std::size_t i = 0; i < o.maps; ++i) maps.push_back(random_mobius(rng));
    std::vector<CheckReport> out;
    for (std::size_t fi = 0; fi < fields.size(); ++fi) {
        CheckReport agg = make("a_covariance[" + fields[fi].name() + "]", tol);
        for (std::size_t mi = 0; mi < maps.size(); ++mi) {
            const auto pts = sample_for_map(mix(o.seed, fi, mi), o.points, fields[fi], maps[mi]);
            agg.merge(check_a_covariance(fields[fi], maps[mi], pts, tol));
        }
        agg.finalize();
        out.push_back(std::move(agg));
    }
    return out;
}

std::vector<CheckReport> b_covariance(const SuiteOptions& o) {
    const double tol = o.tol.value_or(1e-8);
    const auto fields = covariance_fields();
    Rng rng(o.seed + 1);
    std::vector<CheckReport> out;
    std::vector<MobiusMap> maps;
    for (std::size_t i = 0; i < o.maps; ++i) maps.push_back(random_mobius(rng, false));
    for (std::size_t fi = 0; fi < fields.size(); ++fi) {
        CheckReport agg = make("b_covariance[" + fields[fi].name() + "]", tol);
        for (std::size_t mi = 0; mi < maps.size(); ++mi) {
            const auto pts = sample_for_map(mix(o.seed + 1, fi, mi), o.points, fields[fi], maps[mi]);
            agg.merge(check_b_covariance(fields[fi], maps[mi], pts, tol));
        }
        agg.finalize();
        out.push_back(std::move(agg));
    }
    return out;
}

std::vector<CheckReport> counterexample(const SuiteOptions&) {
    CheckReport r = make("counterexample_iz2", 1e-10);
    for (auto [a, y] : {std::pair{1.0, 1.0}, {0.5, 2.0}, {3.0, 0.7}, {2.0, -1.5}}) {
        const auto c = counterexample_iz2(a, y);
        const double q = 3.0 / (4.0 * std::pow(y, 4));
        const double err = std::max({max_abs_diff(c.lhs, Sym2::diag(-2.0 * a - q, q)),
                                     max_abs_diff(c.rhs, Sym2::diag(-2.0 * a, 0.0)), std::abs(c.eigen_gap - q),
                                     c.trace_match ? 0.0 : INFINITY});
        r.record({0.0, y}, err);
        if (a == 1.0 && y == 1.0) {
            r.details = {{"lhs_11", c.lhs.a11}, {"lhs_12", c.lhs.a12}, {"lhs_22", c.lhs.a22},
                         {"rhs_11", c.rhs.a11}, {"rhs_12", c.rhs.a12}, {"rhs_22", c.rhs.a22},
                         {"eigen_gap", c.eigen_gap}, {"trace_lhs", c.lhs.trace()}, {"trace_rhs", c.rhs.trace()}};
        }
    }
    r.finalize();

    // Under iz² the covariance law must fail at (0, 1) by at least 0.5.
    const auto psi = HolomorphicMap::polynomial({0.0, 0.0, Complex{0.0, 1.0}});
    const std::vector<Vec2> at{{0.0, 1.0}};
    const double observed = check_a_covariance_general(ScalarField::quadratic(1.0), psi, at, 0.0).max_error;
    return {r, single("a_covariance_breaks[iz2]", std::max(0.0, 0.5 - observed), 0.0, {{"observed_error", observed}})};
}

std::vector<CheckReport> trace(const SuiteOptions& o) {
    const double tol = o.tol.value_or(1e-8);
    const std::vector<ScalarField> fields{ScalarField::constant(0.3), ScalarField::quadratic(1.0),
                                          ScalarField::bubble(1.0, 8.0, {0.3, 0.2}),
                                          ScalarField::liouville(HolomorphicMap::identity()),
                                          ScalarField::exp_example()};
    struct Case {
        const char* label;
        HolomorphicMap psi;
        Vec2 lo, hi;
    };
    const std::vector<Case> cases{
        {"z^2", HolomorphicMap::polynomial({0.0, 0.0, 1.0}), {0.25, 0.25}, {1.25, 1.25}},
        {"iz^2", HolomorphicMap::polynomial({0.0, 0.0, Complex{0.0, 1.0}}), {0.25, 0.25}, {1.25, 1.25}},
        {"exp", HolomorphicMap::exp(), {-1.0, -1.0}, {1.0, 1.0}},
    };
    std::vector<CheckReport> out;
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        CheckReport agg = make(std::string("trace_conformal[") + cases[ci].label + "]", tol);
        for (std::size_t fi = 0; fi < fields.size(); ++fi) {
            const ScalarField v = pullback(fields[fi], cases[ci].psi);
            const auto pts = sample_box(mix(o.seed, 100 + ci, fi), o.points, cases[ci].lo, cases[ci].hi,
                                        [&](Vec2 x) { return has_margin(v, x, 0.05); });
            agg.merge(check_trace_conformal(fields[fi], cases[ci].psi, pts, tol));
        }
        agg.finalize();
        out.push_back(std::move(agg));
    }
    return out;
}

/// Cubic z + c2 z² + c3 z³ with |f'| ≥ 1/2 on the square [−1, 1]².
HolomorphicMap seeded_cubic(std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> n(0.0, 0.1);
    for (;;) {
        const Complex c2{n(rng), n(rng)}, c3{n(rng), n(rng)};
        if (2.0 * std::abs(c2) * std::numbers::sqrt2 + 6.0 * std::abs(c3) <= 0.5) {
            return HolomorphicMap::polynomial({0.0, 1.0, c2, c3});
        }
    }
}

std::vector<CheckReport> liouville(const SuiteOptions& o) {
    struct Case {
        HolomorphicMap f;
        Vec2 lo, hi;
    };
    const std::vector<Case> cases{{HolomorphicMap::identity(), {-2.0, -2.0}, {2.0, 2.0}},
                                  {HolomorphicMap::exp(), {-1.0, -1.0}, {1.0, 1.0}},
                                  {seeded_cubic(o.seed), {-1.0, -1.0}, {1.0, 1.0}}};
    std::vector<CheckReport> out;
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        const ScalarField u = ScalarField::liouville(cases[ci].f);
        CheckReport r = make("liouville_pde[" + cases[ci].f.name() + "]", 1e-7);
        for (const Vec2& x : sample_box(mix(o.seed, 200 + ci), 200, cases[ci].lo, cases[ci].hi)) {
            const Jet2 j = u.jet(x);
            r.record(x, std::abs(-j.hessian.trace() - std::exp(j.value)));
        }
        r.finalize();
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<CheckReport> chen_li(const SuiteOptions&) {
    CheckReport r = make("chen_li_mass", 1e-3);
    const double R = 100.0;
    for (auto [a, c] : {std::pair{1.0, Vec2{}}, {0.5, Vec2{1.0, -2.0}}, {2.0, Vec2{0.0, 0.5}}}) {
        const double mass = exp_mass_in_disc(ScalarField::chen_li(a, c), c, R) + chen_li_tail_bound(a, R);
        const double rel = std::abs(mass - 8.0 * std::numbers::pi) / (8.0 * std::numbers::pi);
        r.record(c, rel);
        r.details["mass_a=" + std::to_string(a)] = mass;
    }
    r.details["eight_pi"] = 8.0 * std::numbers::pi;
    r.finalize();
    return {r};
}

std::vector<CheckReport> bubble(const SuiteOptions& o) {
    Rng rng(o.seed);
    std::uniform_real_distribution<double> la(std::log(0.5), std::log(2.0)), lb(std::log(0.5), std::log(8.0));
    CheckReport constancy = make("bubble_constancy", 1e-10);
    CheckReport fd = make("bubble_kappa_fd", 1e-5);
    std::vector<double> ratios;
    for (int k = 0; k < 10; ++k) {
        const double a = std::exp(la(rng)), b = std::exp(lb(rng));
        const Vec2 c{0.1 * k, -0.05 * k};
        const ScalarField u = ScalarField::bubble(a, b, c);
        double kappa_mean = 0.0;
        std::vector<Sym2> as;
        for (const Vec2& x : sample_box(mix(o.seed, 300 + k), 50, {-3.0, -3.0}, {3.0, 3.0})) {
            as.push_back(a_from_jet(u.jet(x)));
            kappa_mean += 0.5 * as.back().trace() / 50.0;
        }
        for (const Sym2& m : as) constancy.record(c, max_abs_diff(m, Sym2::identity() * kappa_mean));
        ratios.push_back(kappa_mean * a * a / b);
        const Sym2 afd = a_from_jet(fd_jet(u, c + Vec2{0.3, 0.2}, 1e-3, true));
        fd.record(c, max_abs_diff(afd, Sym2::identity() * bubble_kappa(a, b)) / bubble_kappa(a, b));
    }
    constancy.finalize();
    fd.finalize();
    CheckReport scaling = make("bubble_scaling", 1e-10);
    for (double q : ratios) scaling.record({}, std::abs(q - ratios.front()));
    scaling.details["kappa_a2_over_b"] = ratios.front();
    scaling.details["remark_value_over_resolved"] = 4.0;
    scaling.finalize();
    return {constancy, scaling, fd};
}

std::vector<CheckReport> cross(const SuiteOptions& o) {
    Rng rng(o.seed);
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    CheckReport r = make("lambda_a_equals_2_lambda_b", 1e-10);
    for (int i = 0; i < 1000; ++i) {
        Jet2 j;
        j.value = val(rng);
        j.gradient = {n(rng), n(rng)};
        j.hessian = {n(rng), n(rng), n(rng)};
        const EigenPair ea = eig2(a_from_jet(j));
        const EigenPair eb = b_from_jet(j).eigenvalues();
        r.record(j.gradient, std::max(std::abs(ea.lambda1 - 2.0 * eb.lambda1), std::abs(ea.lambda2 - 2.0 * eb.lambda2)));
    }
    r.finalize();
    return {r};
}

std::vector<CheckReport> moving_spheres(const SuiteOptions&) {
    const ScalarField u = ScalarField::bubble(1.0, 8.0);
    const auto at0 = critical_lambda(u, {}, 10.0, 1e-10);
    const auto at1 = critical_lambda(u, {1.0, 0.0}, 10.0, 1e-10);
    const auto flat = critical_lambda(ScalarField::constant(0.0), {}, 10.0);
    return {single("lambda_bar[bubble,x=0]", std::abs(at0.lambda_bar - 1.0), 1e-3, {{"lambda_bar", at0.lambda_bar}}),
            single("equality[bubble,x=0]", at0.equality_residual, 1e-8, {{"min_slack", at0.min_slack}}),
            single("lambda_bar[bubble,x=(1,0)]", std::abs(at1.lambda_bar - std::numbers::sqrt2), 1e-3,
                   {{"lambda_bar", at1.lambda_bar}}),
            single("equality[bubble,x=(1,0)]", at1.equality_residual, 1e-6),
            single("unbounded[constant]", flat.unbounded ? 0.0 : 1.0, 0.0)};
}

RadialProfile sampled(const std::vector<double>& r, const std::function<double(double)>& v) {
    RadialProfile p;
    p.r = r;
    for (double x : r) p.v.push_back(v(x));
    return p;
}

std::vector<CheckReport> envelope(const SuiteOptions&) {
    const auto grid = linspace(0.0, 4.0, 401);
    const double dr = grid[1] - grid[0];
    CheckReport quad = make("envelope_r2", 4.0 * dr * dr);
    const auto e = inf_envelope(sampled(grid, [](double r) { return r * r; }), 1.0);
    for (std::size_t i = 0; i < grid.size(); ++i) quad.record({grid[i], 0.0}, std::abs(e.profile.v[i] - 0.5 * grid[i] * grid[i]));
    quad.finalize();

    struct Lip {
        std::function<double(double)> v;
        double L;
    };
    const std::vector<Lip> profiles{{[](double r) { return std::abs(r - 2.0); }, 1.0},
                                    {[](double r) { return std::sin(3.0 * r); }, 3.0},
                                    {[](double r) { return -0.5 * r; }, 0.5},
                                    {[](double r) { return std::min(r, 1.0); }, 1.0},
                                    {[](double r) { return 2.0 * std::log(8.0 / (8.0 * r * r + 8.0)); }, 1.0}};
    CheckReport order = make("envelope_order", 0.0);
    CheckReport semi = make("envelope_semiconcavity", 1e-9);
    CheckReport conv = make("envelope_convergence", 0.0);
    for (const auto& prof : profiles) {
        const RadialProfile p = sampled(grid, prof.v);
        std::vector<double> prev(p.v);
        for (double eps : {0.01, 0.05, 0.2, 1.0}) {
            const auto env = inf_envelope(p, eps);
            double viol = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                viol = std::max({viol, env.profile.v[i] - p.v[i], env.profile.v[i] - prev[i]});
            }
            order.record({eps, 0.0}, viol);
            semi.record({eps, 0.0}, env.semiconcavity_defect);
            conv.record({eps, 0.0}, std::max(0.0, env.sup_distance_to_input - prof.L * prof.L * eps));
            prev = env.profile.v;
        }
    }
    order.finalize();
    semi.finalize();
    conv.finalize();
    return {quad, order, semi, conv};
}

std::vector<CheckReport> monotonicity(const SuiteOptions&) {
    const auto grid = linspace(0.01, 20.0, 2000);
    std::vector<CheckReport> out;
    CheckReport b = check_monotone_4log(sampled(grid, [](double r) { return 2.0 * std::log(8.0 / (8.0 * r * r + 2.0)); }), 0.0);
    b.name = "monotone_4log[bubble]";
    out.push_back(b);
    CheckReport flat = check_monotone_4log(sampled(grid, [](double r) { return -4.0 * std::log(r); }), 0.0);
    flat.name = "monotone_4log[-4ln r]";
    out.push_back(flat);

    const CheckReport steep = check_monotone_4log(sampled(grid, [](double r) { return -5.0 * std::log(r); }), 0.0);
    double max_l2 = -INFINITY;
    for (double r : grid) {
        max_l2 = std::max(max_l2, radial_lambda(-5.0 * std::log(r), -5.0 / r, 5.0 / (r * r), r).lambda2);
    }
    out.push_back(single("monotone_4log_fails[-5ln r]", (steep.pass ? 1.0 : 0.0) + std::max(0.0, max_l2), 0.0,
                         {{"violation", steep.max_error}, {"max_lambda2", max_l2}}));
    return out;
}

std::vector<CheckReport> radial_solver(const SuiteOptions&) {
    std::vector<CheckReport> out;
    struct Case {
        SymmetricFunction f;
        double a, b;
    };
    for (const Case& c : {Case{SymmetricFunction::sigma2(), 1.0, 2.0}, Case{SymmetricFunction::sigma1(), 1.0, 1.0}}) {
        const auto sol = ode_solve(c.f, ConeIndex(2.0), 2.0 * std::log(8.0 * c.a / c.b), 5.0);
        CheckReport r = make("radial_solver[" + c.f.name() + "]", 1e-5);
        for (std::size_t i = 0; i < sol.profile.size(); ++i) {
            const double x = sol.profile.r[i];
            r.record({x, 0.0}, std::abs(sol.profile.v[i] - 2.0 * std::log(8.0 * c.a / (8.0 * x * x + c.b))));
        }
        r.details["max_residual"] = sol.max_residual();
        r.details["r_end"] = sol.profile.r.back();
        r.record({}, sol.cone_exit || sol.max_residual() > 1e-9 ? INFINITY : 0.0);
        r.finalize();
        out.push_back(std::move(r));
    }
    // Exactly one of: a cone exit, or a full-length solve with residual ≤ 1e-9.
    CheckReport x = make("radial_solver_exclusive", 0.0);
    auto exclusive = [](const RadialSolution& s) {
        const bool exit = s.cone_exit.has_value();
        const bool clean = !exit && !s.blowup && s.max_residual() <= 1e-9;
        return exit != clean ? 0.0 : 1.0;
    };
    for (double dv : {1.0, -1.0, 0.5}) {
        x.record({dv, 0.0}, exclusive(ode_solve(SymmetricFunction::sigma2(), ConeIndex(2.0), 2.0 * std::log(4.0) + dv, 5.0)));
    }
    const auto from = ode_solve_from(SymmetricFunction::sigma1(ConeIndex(1.5)), ConeIndex(1.5), 1.0, 0.0, -4.5, 20.0);
    x.record({1.0, -4.5}, exclusive(from));
    x.details["cone_exit_from_r1"] = from.cone_exit.value_or(-1.0);
    x.finalize();
    out.push_back(std::move(x));
    return out;
}

using SuiteFn = std::vector<CheckReport> (*)(const SuiteOptions&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> r{
        {"covariance", covariance},        {"b-covariance", b_covariance}, {"counterexample", counterexample},
        {"trace", trace},                  {"liouville", liouville},       {"chen-li", chen_li},
        {"bubble", bubble},                {"cross-representation", cross}, {"moving-spheres", moving_spheres},
        {"envelope", envelope},            {"monotonicity", monotonicity}, {"radial-solver", radial_solver},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, f] : registry()) n.push_back(k);
        return n;
    }();
    return names;
}

std::vector<CheckReport> run_suite(const std::string& name, const SuiteOptions& opts) {
    std::vector<CheckReport> out;
    for (const auto& [k, f] : registry()) {
        if (name == "all" || name == k) {
            auto part = f(opts);
            out.insert(out.end(), part.begin(), part.end());
        }
    }
    if (out.empty()) throw ConfigError("unknown suite '" + name + "'");
    return out;
}

}  // namespace conformal2d
