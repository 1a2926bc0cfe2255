#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "conformal2d/conformal_ops.hpp"
#include "conformal2d/errors.hpp"
#include "conformal2d/fields.hpp"
#include "conformal2d/invariance.hpp"
#include "conformal2d/io.hpp"
#include "conformal2d/mobius.hpp"
#include "conformal2d/moving_spheres.hpp"
#include "conformal2d/radial.hpp"
#include "conformal2d/sampling.hpp"
#include "conformal2d/suites.hpp"

namespace py = pybind11;
using namespace conformal2d;

namespace {

// Points cross the boundary as (x1, x2) tuples.
using Pt = std::pair<double, double>;

Vec2 vec(const Pt& p) { return {p.first, p.second}; }
Pt pt(Vec2 v) { return {v.x1, v.x2}; }

std::vector<Vec2> vecs(const std::vector<Pt>& ps) {
    std::vector<Vec2> out;
    out.reserve(ps.size());
    for (const auto& p : ps) out.push_back(vec(p));
    return out;
}

py::tuple sym(const Sym2& s) { return py::make_tuple(py::make_tuple(s.a11, s.a12), py::make_tuple(s.a12, s.a22)); }

Sym2 sym_from(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

py::dict jet_dict(const Jet2& j) {
    py::dict d;
    d["value"] = j.value;
    d["gradient"] = pt(j.gradient);
    d["hessian"] = sym(j.hessian);
    return d;
}

Jet2 jet_from(double value, const Pt& g, const std::array<double, 3>& h) { return {value, vec(g), sym_from(h)}; }

/// Parses a JSON string through the same schema as the CLI.
Json parse(const std::string& s) {
    try {
        return Json::parse(s);
    } catch (const Json::parse_error& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

PYBIND11_MODULE(_conformal2d, m) {
    m.doc() = "Möbius-invariant second-order operators in the plane";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto domain = py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<PoleError>(m, "PoleError", domain.ptr());
    py::register_exception<ConeError>(m, "ConeError", base.ptr());
    py::register_exception<SeedError>(m, "SeedError", base.ptr());
    py::register_exception<StepFailure>(m, "StepFailure", base.ptr());
    py::register_exception<FitDiverged>(m, "FitDiverged", base.ptr());
    py::register_exception<ConjugatingUnsupported>(m, "ConjugatingUnsupported", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    py::class_<EigenPair>(m, "EigenPair")
        .def_readonly("lambda1", &EigenPair::lambda1)
        .def_readonly("lambda2", &EigenPair::lambda2)
        .def("__iter__", [](const EigenPair& e) { return py::iter(py::make_tuple(e.lambda1, e.lambda2)); })
        .def("__repr__", [](const EigenPair& e) {
            return "EigenPair(" + std::to_string(e.lambda1) + ", " + std::to_string(e.lambda2) + ")";
        });

    m.def("eig2", [](const std::array<double, 3>& a) { return eig2(sym_from(a)); }, py::arg("a11_a12_a22"),
          "Descending eigenvalues of [[a11, a12], [a12, a22]].");

    py::class_<MobiusMap>(m, "MobiusMap")
        .def(py::init<Complex, Complex, Complex, Complex, bool>(), py::arg("a"), py::arg("b"), py::arg("c"),
             py::arg("d"), py::arg("conjugating") = false)
        .def_static("identity", &MobiusMap::identity)
        .def_static("translation", [](const Pt& t) { return MobiusMap::translation(vec(t)); })
        .def_static("dilation", &MobiusMap::dilation)
        .def_static("rotation", &MobiusMap::rotation)
        .def_static("reflection", &MobiusMap::reflection)
        .def_static("inversion", &MobiusMap::inversion)
        .def_static("sphere_inversion", [](const Pt& c, double lam) { return MobiusMap::sphere_inversion(vec(c), lam); })
        .def_property_readonly("coefficients", [](const MobiusMap& mm) { return py::make_tuple(mm.a(), mm.b(), mm.c(), mm.d()); })
        .def_property_readonly("conjugating", &MobiusMap::conjugating)
        .def("__call__", [](const MobiusMap& mm, const Pt& p) { return pt(mm.apply(vec(p))); })
        .def("jacobian", [](const MobiusMap& mm, const Pt& p) {
            const Jacobian j = jacobian(mm, vec(p));
            const Mat2& o = j.o.matrix();
            py::dict d;
            d["J"] = py::make_tuple(py::make_tuple(j.j.a11, j.j.a12), py::make_tuple(j.j.a21, j.j.a22));
            d["det"] = j.det;
            d["conf"] = j.conf;
            d["O"] = py::make_tuple(py::make_tuple(o.a11, o.a12), py::make_tuple(o.a21, o.a22));
            return d;
        })
        .def("__matmul__", [](const MobiusMap& a, const MobiusMap& b) { return compose(a, b); })
        .def("inverse", [](const MobiusMap& mm) { return inverse(mm); })
        .def("to_json", [](const MobiusMap& mm) { return mobius_to_json(mm).dump(); });

    py::class_<HolomorphicMap>(m, "HolomorphicMap")
        .def_static("identity", &HolomorphicMap::identity)
        .def_static("exp", &HolomorphicMap::exp)
        .def_static("polynomial", &HolomorphicMap::polynomial, py::arg("coefficients"))
        .def_static("mobius", &HolomorphicMap::mobius)
        .def_property_readonly("name", &HolomorphicMap::name)
        .def("__call__", [](const HolomorphicMap& h, Complex z) {
            const HoloJet j = h.eval(z);
            return py::make_tuple(j.f, j.d1, j.d2, j.d3);
        })
        .def("excluded", &HolomorphicMap::excluded)
        .def("__matmul__", [](const HolomorphicMap& a, const HolomorphicMap& b) { return compose(a, b); });

    py::class_<ScalarField>(m, "ScalarField")
        .def_static("bubble", [](double a, double b, const Pt& c) { return ScalarField::bubble(a, b, vec(c)); },
                    py::arg("a"), py::arg("b"), py::arg("center") = Pt{0.0, 0.0})
        .def_static("chen_li", [](double a, const Pt& c) { return ScalarField::chen_li(a, vec(c)); }, py::arg("a"),
                    py::arg("center") = Pt{0.0, 0.0})
        .def_static("liouville", &ScalarField::liouville)
        .def_static("exp_example", &ScalarField::exp_example)
        .def_static("quadratic", &ScalarField::quadratic)
        .def_static("constant", &ScalarField::constant)
        .def_static("affine", [](double c, const Pt& g) { return ScalarField::affine(c, vec(g)); })
        .def_static("radial",
                    [](const std::vector<double>& r, const std::vector<double>& v, const Pt& c) {
                        RadialProfile p;
                        p.r = r;
                        p.v = v;
                        return ScalarField::radial(p, vec(c));
                    },
                    py::arg("r"), py::arg("v"), py::arg("center") = Pt{0.0, 0.0})
        .def_static("from_json", [](const std::string& s) { return field_from_json(parse(s)); })
        .def_property_readonly("name", &ScalarField::name)
        .def("__call__", [](const ScalarField& u, const Pt& x) { return u.value(vec(x)); })
        .def("jet", [](const ScalarField& u, const Pt& x) { return jet_dict(u.jet(vec(x))); })
        .def("excluded", [](const ScalarField& u, const Pt& x) { return u.excluded(vec(x)); });

    m.def("pullback", py::overload_cast<const ScalarField&, const MobiusMap&>(&pullback));
    m.def("pullback", py::overload_cast<const ScalarField&, const HolomorphicMap&>(&pullback));
    m.def("fd_jet", [](const ScalarField& u, const Pt& x, double h, bool rich) { return jet_dict(fd_jet(u, vec(x), h, rich)); },
          py::arg("u"), py::arg("x"), py::arg("h") = 1e-4, py::arg("richardson") = false);
    m.def("exp_mass_in_disc", [](const ScalarField& u, const Pt& c, double r) { return exp_mass_in_disc(u, vec(c), r); });
    m.def("chen_li_tail_bound", &chen_li_tail_bound);

    m.def("a_from_jet", [](double v, const Pt& g, const std::array<double, 3>& h) { return sym(a_from_jet(jet_from(v, g, h))); },
          py::arg("value"), py::arg("gradient"), py::arg("hessian"));
    m.def("b_from_jet",
          [](double v, const Pt& g, const std::array<double, 3>& h) {
              const Herm2 b = b_from_jet(jet_from(v, g, h));
              return py::make_tuple(b.bzzbar, b.bzz);
          },
          py::arg("value"), py::arg("gradient"), py::arg("hessian"), "Returns (B_zzbar, B_zz).");
    m.def("a_matrix", [](const ScalarField& u, const Pt& x) { return sym(a_from_jet(u.jet(vec(x)))); });
    m.def("lambda_a", [](const ScalarField& u, const Pt& x) { return lambda_a(u, vec(x)); });

    py::class_<ConeIndex>(m, "ConeIndex")
        .def(py::init<double>())
        .def_property_readonly("p", &ConeIndex::p)
        .def_property_readonly("boundary_slope", &ConeIndex::boundary_slope);
    m.def("in_cone",
          [](double l1, double l2, const ConeIndex& c) {
              const auto r = in_cone(l1, l2, c);
              return py::make_tuple(r.inside, r.margin);
          },
          "Returns (inside, margin).");

    py::class_<SymmetricFunction>(m, "SymmetricFunction")
        .def_static("sigma1", &SymmetricFunction::sigma1, py::arg("cone") = ConeIndex(2.0))
        .def_static("sigma2", &SymmetricFunction::sigma2)
        .def_static("weighted", &SymmetricFunction::weighted)
        .def_static("by_name", &function_by_name, py::arg("name"), py::arg("cone") = ConeIndex(2.0))
        .def_static("custom",
                    [](std::string name, std::function<double(double, double)> value,
                       std::function<Pt(double, double)> grad, const ConeIndex& cone) {
                        return SymmetricFunction::custom(
                            std::move(name), std::move(value),
                            [grad](double l1, double l2) { return vec(grad(l1, l2)); }, cone);
                    },
                    py::arg("name"), py::arg("value"), py::arg("gradient"), py::arg("cone"))
        .def_property_readonly("name", &SymmetricFunction::name)
        .def_property_readonly("cone", &SymmetricFunction::cone)
        .def("__call__", &SymmetricFunction::value);

    py::class_<CheckReport>(m, "CheckReport")
        .def_readonly("name", &CheckReport::name)
        .def_readonly("points_tested", &CheckReport::points_tested)
        .def_readonly("max_error", &CheckReport::max_error)
        .def_readonly("tolerance", &CheckReport::tolerance)
        .def_readonly("passed", &CheckReport::pass)
        .def_readonly("details", &CheckReport::details)
        .def("to_json", [](const CheckReport& r) { return to_json(r).dump(); })
        .def("__repr__", [](const CheckReport& r) {
            return "CheckReport(" + r.name + ", max_error=" + std::to_string(r.max_error) +
                   (r.pass ? ", pass)" : ", FAIL)");
        });

    m.def("sample_for_map", [](std::uint64_t seed, std::size_t n, const ScalarField& u, const MobiusMap& mm) {
        std::vector<Pt> out;
        for (Vec2 v : sample_for_map(seed, n, u, mm)) out.push_back(pt(v));
        return out;
    });
    m.def("check_a_covariance", [](const ScalarField& u, const MobiusMap& mm, const std::vector<Pt>& pts, double tol) {
        return check_a_covariance(u, mm, vecs(pts), tol);
    }, py::arg("u"), py::arg("map"), py::arg("points"), py::arg("tol") = 1e-8);
    m.def("check_b_covariance", [](const ScalarField& u, const MobiusMap& mm, const std::vector<Pt>& pts, double tol) {
        return check_b_covariance(u, mm, vecs(pts), tol);
    }, py::arg("u"), py::arg("map"), py::arg("points"), py::arg("tol") = 1e-8);
    m.def("check_trace_conformal", [](const ScalarField& u, const HolomorphicMap& psi, const std::vector<Pt>& pts, double tol) {
        return check_trace_conformal(u, psi, vecs(pts), tol);
    }, py::arg("u"), py::arg("psi"), py::arg("points"), py::arg("tol") = 1e-8);
    m.def("counterexample_iz2", [](double a, double y) {
        const auto c = counterexample_iz2(a, y);
        py::dict d;
        d["lhs"] = sym(c.lhs);
        d["rhs"] = sym(c.rhs);
        d["trace_match"] = c.trace_match;
        d["eigen_gap"] = c.eigen_gap;
        d["conjugation_error"] = c.conjugation_error;
        return d;
    });
    m.def("run_suite",
          [](const std::string& name, std::uint64_t seed) {
              SuiteOptions o;
              o.seed = seed;
              return run_suite(name, o);
          },
          py::arg("name"), py::arg("seed") = 7);
    m.def("suite_names", &suite_names);
    m.def("bubble_kappa", &bubble_kappa);

    m.def("radial_lambda", [](double v, double v1, double v2, double r) {
        const auto l = radial_lambda(v, v1, v2, r);
        return py::make_tuple(l.lambda1, l.lambda2);
    });
    m.def("inf_envelope",
          [](const std::vector<double>& r, const std::vector<double>& v, double eps) {
              RadialProfile p;
              p.r = r;
              p.v = v;
              const auto e = inf_envelope(p, eps);
              py::dict d;
              d["v"] = e.profile.v;
              d["semiconcavity_defect"] = e.semiconcavity_defect;
              d["sup_distance_to_input"] = e.sup_distance_to_input;
              d["interior"] = py::make_tuple(e.interior_begin, e.interior_end);
              return d;
          },
          py::arg("r"), py::arg("v"), py::arg("eps"));
    m.def("check_monotone_4log", [](const std::vector<double>& r, const std::vector<double>& v, double k0) {
        RadialProfile p;
        p.r = r;
        p.v = v;
        return check_monotone_4log(p, k0);
    });
    m.def("minimize_on_circles", [](const ScalarField& u, const Pt& c, const std::vector<double>& radii, int angles) {
        return minimize_on_circles(u, vec(c), radii, angles).v;
    }, py::arg("u"), py::arg("center"), py::arg("radii"), py::arg("angular_samples") = 64);
    m.def("diagonal_seed", &diagonal_seed);
    m.def("ode_solve",
          [](const SymmetricFunction& f, const ConeIndex& p, double v0, double r_max, double rtol, double atol) {
              OdeConfig cfg;
              cfg.rtol = rtol;
              cfg.atol = atol;
              const auto s = ode_solve(f, p, v0, r_max, cfg);
              py::dict d;
              d["r"] = s.profile.r;
              d["v"] = s.profile.v;
              d["dv"] = s.profile.dv;
              d["lambda1"] = s.lambda1;
              d["lambda2"] = s.lambda2;
              d["residual"] = s.residual;
              d["cone_exit"] = s.cone_exit ? py::cast(*s.cone_exit) : py::none();
              d["blowup"] = s.blowup ? py::cast(*s.blowup) : py::none();
              d["mu"] = s.mu;
              return d;
          },
          py::arg("f"), py::arg("cone"), py::arg("v0"), py::arg("r_max"), py::arg("rtol") = 1e-8,
          py::arg("atol") = 1e-8);

    m.def("ms_transform", [](const ScalarField& u, const Pt& x, double lam) { return ms_transform(u, vec(x), lam); });
    m.def("critical_lambda",
          [](const ScalarField& u, const Pt& x, double lam_max, double tol) {
              const auto r = critical_lambda(u, vec(x), lam_max, tol);
              py::dict d;
              d["lambda_bar"] = r.lambda_bar;
              d["unbounded"] = r.unbounded;
              d["min_slack"] = r.min_slack;
              d["equality_residual"] = r.equality_residual;
              return d;
          },
          py::arg("u"), py::arg("x"), py::arg("lam_max"), py::arg("tol") = 1e-3);
    m.def("bubble_fit",
          [](const ScalarField& u, const std::vector<Pt>& pts, const std::vector<Pt>& validation) {
              const auto f = bubble_fit(u, vecs(pts), vecs(validation));
              py::dict d;
              d["a"] = f.a;
              d["b"] = f.b;
              d["center"] = pt(f.center);
              d["residual"] = f.residual;
              d["is_bubble"] = f.is_bubble();
              return d;
          });
}
