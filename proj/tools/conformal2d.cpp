// Command-line front end: verification suites, envelopes, the radial solver,
// and moving-spheres experiments.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error,
// 3 I/O error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conformal2d/errors.hpp"
#include "conformal2d/io.hpp"
#include "conformal2d/moving_spheres.hpp"
#include "conformal2d/radial.hpp"
#include "conformal2d/sampling.hpp"
#include "conformal2d/suites.hpp"

namespace fs = std::filesystem;
using namespace conformal2d;

namespace {

constexpr int kPass = 0, kFail = 1, kConfig = 2, kIo = 3;

struct Grid {
    double r0 = 0.0, r1 = 4.0;
    std::size_t n = 401;
};

Grid parse_grid(const std::string& s) {
    Grid g;
    double n = 0.0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf%c", &g.r0, &g.r1, &n, &tail) != 3) {
        throw ConfigError("grid must look like r0:r1:n, got '" + s + "'");
    }
    if (!(g.r0 >= 0.0 && g.r1 > g.r0) || !(n >= 2.0) || n != std::floor(n)) {
        throw ConfigError("grid needs 0 ≤ r0 < r1 and an integer n ≥ 2");
    }
    g.n = static_cast<std::size_t>(n);
    return g;
}

Vec2 parse_point(const std::string& s) {
    double a = 0.0, b = 0.0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%lf,%lf%c", &a, &b, &tail) != 2) throw ConfigError("point must look like x1,x2");
    return {a, b};
}

/// Inline JSON, or @path to read it from a file.
Json parse_json_arg(const std::string& s) {
    if (!s.empty() && s.front() == '@') return read_json(s.substr(1));
    try {
        return Json::parse(s);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON argument: ") + e.what());
    }
}

void print_checks(const std::vector<CheckReport>& checks) {
    for (const auto& c : checks) {
        std::printf("%s  %-52s max_error=%.3e tol=%.1e n=%zu\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.max_error,
                    c.tolerance, c.points_tested);
    }
}

bool all_pass(const std::vector<CheckReport>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
}

int finish(const std::vector<CheckReport>& checks, std::uint64_t seed, const Json& extra, const std::string& out) {
    print_checks(checks);
    if (!out.empty()) write_json(make_report(checks, seed, extra), out);
    return all_pass(checks) ? kPass : kFail;
}

// --- verify ------------------------------------------------------------------

struct VerifyArgs {
    std::vector<std::string> suites;
    std::uint64_t seed = 7;
    double tol = 0.0;
    std::size_t points = 50;
    std::string out, config;
};

int run_verify(VerifyArgs a, bool tol_set, bool seed_set, bool suites_set) {
    Json fields = Json::array(), maps = Json::array();
    if (!a.config.empty()) {
        const Json cfg = read_json(a.config);
        if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
        static const std::set<std::string> known{"suites", "seed", "tol", "points", "out", "fields", "maps"};
        for (const auto& [k, v] : cfg.items()) {
            if (!known.count(k)) throw ConfigError("unknown config key '" + k + "'");
        }
        try {
            if (!suites_set && cfg.contains("suites")) a.suites = cfg["suites"].get<std::vector<std::string>>();
            if (!seed_set && cfg.contains("seed")) a.seed = cfg["seed"].get<std::uint64_t>();
            if (!tol_set && cfg.contains("tol")) {
                a.tol = cfg["tol"].get<double>();
                tol_set = true;
            }
            if (cfg.contains("points")) a.points = cfg["points"].get<std::size_t>();
            if (a.out.empty() && cfg.contains("out")) a.out = cfg["out"].get<std::string>();
        } catch (const Json::exception& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        fields = cfg.value("fields", Json::array());
        maps = cfg.value("maps", Json::array());
        if (!fields.is_array() || !maps.is_array()) throw ConfigError("config 'fields' and 'maps' must be arrays");
    }
    if (a.suites.empty()) a.suites = {"all"};
    if (tol_set && !(a.tol > 0.0)) throw ConfigError("tol must be positive");
    if (a.points == 0) throw ConfigError("points must be positive");

    // Parse everything before running anything so malformed input never yields a report.
    std::vector<ScalarField> custom_fields;
    std::vector<MobiusMap> custom_maps;
    for (const auto& f : fields) custom_fields.push_back(field_from_json(f));
    for (const auto& m : maps) custom_maps.push_back(mobius_from_json(m));
    for (const auto& s : a.suites) {
        if (s != "all" && std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end()) {
            throw ConfigError("unknown suite '" + s + "'");
        }
    }

    SuiteOptions opts;
    opts.seed = a.seed;
    opts.points = a.points;
    if (tol_set) opts.tol = a.tol;
    std::vector<CheckReport> checks;
    for (const auto& s : a.suites) {
        auto part = run_suite(s, opts);
        checks.insert(checks.end(), part.begin(), part.end());
    }
    for (std::size_t i = 0; i < custom_fields.size(); ++i) {
        for (std::size_t j = 0; j < custom_maps.size(); ++j) {
            const auto pts = sample_for_map(a.seed + 1000 * i + j, a.points, custom_fields[i], custom_maps[j]);
            CheckReport r = check_a_covariance(custom_fields[i], custom_maps[j], pts, opts.tol.value_or(1e-8));
            r.name = "a_covariance[config field " + std::to_string(i) + ", map " + std::to_string(j) + "]";
            checks.push_back(std::move(r));
        }
    }
    return finish(checks, a.seed, {{"command", "verify"}, {"suites", a.suites}}, a.out);
}

// --- envelope ----------------------------------------------------------------

int run_envelope(const std::string& field, const std::string& profile_csv, const std::string& center,
                 const std::string& grid, double eps, int angles, const std::string& out, const std::string& csv_dir,
                 bool dat) {
    if (field.empty() == profile_csv.empty()) throw ConfigError("envelope needs exactly one of --field or --profile");
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    RadialProfile input;
    if (!profile_csv.empty()) {
        input = read_profile_csv(profile_csv);
    } else {
        const ScalarField u = field_from_json(parse_json_arg(field));
        const Grid g = parse_grid(grid);
        input = minimize_on_circles(u, parse_point(center), linspace(g.r0, g.r1, g.n), angles);
    }
    const EnvelopeResult env = inf_envelope(input, eps);

    CheckReport semi;
    semi.name = "envelope_semiconcavity";
    semi.tolerance = 1e-9;
    semi.record({}, env.semiconcavity_defect);
    semi.finalize();
    CheckReport below;
    below.name = "envelope_below_input";
    below.tolerance = 0.0;
    for (std::size_t i = 0; i < input.size(); ++i) below.record({input.r[i], 0.0}, std::max(0.0, env.profile.v[i] - input.v[i]));
    below.details = {{"sup_distance_to_input", env.sup_distance_to_input},
                     {"interior_begin", static_cast<double>(env.interior_begin)},
                     {"interior_end", static_cast<double>(env.interior_end)},
                     {"epsilon", eps}};
    below.finalize();

    if (!csv_dir.empty()) {
        ensure_dir(csv_dir);
        write_profile_csv(input, fs::path(csv_dir) / "profile.csv");
        write_profile_csv(env.profile, fs::path(csv_dir) / "envelope.csv");
        if (dat) {
            write_profile_dat(input, fs::path(csv_dir) / "profile.dat");
            write_profile_dat(env.profile, fs::path(csv_dir) / "envelope.dat");
        }
    }
    return finish({semi, below}, 0, {{"command", "envelope"}}, out);
}

// --- solve-radial ------------------------------------------------------------

int run_solve(const std::string& fname, double cone, double v0, double r_max, double rtol, double atol,
              const std::string& out, const std::string& csv_dir, bool dat) {
    if (!(r_max > 0.0)) throw ConfigError("r-max must be positive");
    std::optional<ConeIndex> p;
    try {
        p.emplace(cone);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const SymmetricFunction f = function_by_name(fname, *p);
    OdeConfig cfg;
    cfg.rtol = rtol;
    cfg.atol = atol;
    const RadialSolution sol = ode_solve(f, *p, v0, r_max, cfg);

    CheckReport res;
    res.name = "ode_residual[" + f.name() + "]";
    res.tolerance = 1e-9;
    for (std::size_t i = 0; i < sol.residual.size(); ++i) res.record({sol.profile.r[i], 0.0}, sol.residual[i]);
    res.details = {{"mu", sol.mu},
                   {"r_end", sol.profile.r.back()},
                   {"cone_exit", sol.cone_exit.value_or(-1.0)},
                   {"steps", static_cast<double>(sol.profile.size())},
                   {"rejected_steps", static_cast<double>(sol.rejected_steps)}};
    res.finalize();
    if (sol.cone_exit) std::printf("cone exit at r = %.17g\n", *sol.cone_exit);

    if (!csv_dir.empty()) {
        ensure_dir(csv_dir);
        write_solution_csv(sol, fs::path(csv_dir) / "solution.csv");
        write_profile_csv(sol.profile, fs::path(csv_dir) / "profile.csv");
        if (dat) write_profile_dat(sol.profile, fs::path(csv_dir) / "profile.dat");
    }
    return finish({res}, 0, {{"command", "solve-radial"}, {"f", f.name()}, {"cone", cone}, {"v0", v0}}, out);
}

// --- moving-spheres ----------------------------------------------------------

int run_moving(const std::string& field, const std::string& x, double lam_max, double tol, const std::string& out,
               const std::string& csv_dir) {
    if (!(lam_max > 0.0) || !(tol > 0.0)) throw ConfigError("lam-max and tol must be positive");
    const ScalarField u = field_from_json(parse_json_arg(field));
    const Vec2 at = parse_point(x);
    const MovingSphereReport rep = critical_lambda(u, at, lam_max, tol);

    CheckReport c;
    c.name = "moving_sphere_slack";
    c.tolerance = 1e-8;
    c.record(at, std::max(0.0, -rep.min_slack));
    c.details = {{"lambda_bar", rep.lambda_bar},
                 {"unbounded", rep.unbounded ? 1.0 : 0.0},
                 {"min_slack", rep.min_slack},
                 {"equality_residual", rep.equality_residual}};
    c.finalize();
    std::printf("lambda_bar = %.17g%s, equality residual = %.3e\n", rep.lambda_bar, rep.unbounded ? " (unbounded)" : "",
                rep.equality_residual);

    if (!csv_dir.empty()) {
        ensure_dir(csv_dir);
        const ScalarField t = ms_transform(u, at, rep.lambda_bar);
        std::ofstream csv(fs::path(csv_dir) / "slack.csv");
        if (!csv) throw IoError("cannot write slack.csv in '" + csv_dir + "'");
        csv << "rho,theta,u,u_reflected\n";
        for (int i = 0; i < 64; ++i) {
            const double rho = rep.lambda_bar * std::pow(100.0, i / 63.0);
            for (int k = 0; k < 16; ++k) {
                const double th = 2.0 * M_PI * k / 16;
                const Vec2 y = at + Vec2{rho * std::cos(th), rho * std::sin(th)};
                if (u.excluded(y) || t.excluded(y)) continue;
                csv << format_double(rho) << ',' << format_double(th) << ',' << format_double(u.value(y)) << ','
                    << format_double(t.value(y)) << '\n';
            }
        }
        if (!csv) throw IoError("write failed for slack.csv");
    }
    return finish({c}, 0, {{"command", "moving-spheres"}, {"x", {at.x1, at.x2}}}, out);
}

// --- report ------------------------------------------------------------------

int run_report(const std::vector<std::string>& inputs, const std::string& out) {
    std::vector<CheckReport> checks;
    std::uint64_t seed = 0;
    for (const auto& path : inputs) {
        const Json j = read_json(path);
        if (!j.is_object() || j.value("schema", "") != kReportSchema) {
            throw ConfigError("'" + path + "' is not a " + std::string(kReportSchema) + " report");
        }
        try {
            seed = j.value("seed", seed);
            for (const auto& c : j.at("checks")) {
                CheckReport r;
                r.name = c.at("name").get<std::string>();
                r.points_tested = c.at("points_tested").get<std::size_t>();
                r.max_error = c.at("max_error").is_null() ? INFINITY : c.at("max_error").get<double>();
                r.tolerance = c.at("tolerance").get<double>();
                const Json details = c.value("details", Json::object());
                for (const auto& [k, v] : details.items()) {
                    r.details[k] = v.is_number() ? v.get<double>() : NAN;
                }
                const Json witnesses = c.value("witnesses", Json::array());
                for (const auto& w : witnesses) {
                    r.witnesses.push_back({{w.at("point")[0].get<double>(), w.at("point")[1].get<double>()},
                                           w.at("error").is_null() ? INFINITY : w.at("error").get<double>()});
                }
                r.finalize();
                checks.push_back(std::move(r));
            }
        } catch (const Json::exception& e) {
            throw ConfigError("'" + path + "': " + e.what());
        }
    }
    return finish(checks, seed, {{"command", "report"}, {"inputs", inputs}}, out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Möbius-invariant operator calculus in the plane: verification and experiments"};
    app.require_subcommand(1);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run named verification suites");
    verify->add_option("--suite", va.suites, "Suite name (repeatable); one of the names below or 'all'");
    verify->add_option("--seed", va.seed, "RNG seed");
    verify->add_option("--tol", va.tol, "Tolerance for covariance and trace checks");
    verify->add_option("--points", va.points, "Sample points per field and map");
    verify->add_option("--out", va.out, "JSON report path");
    verify->add_option("--config", va.config, "JSON config {suites, seed, tol, points, out, fields, maps}");
    std::string suite_help = "Suites:";
    for (const auto& s : suite_names()) suite_help += " " + s;
    verify->footer(suite_help);

    std::string field, profile_csv, center = "0,0", grid = "0:4:401", out, csv_dir;
    double eps = 0.1;
    int angles = 64;
    bool dat = false;
    auto* envelope = app.add_subcommand("envelope", "ε-lower envelope of a radial profile");
    envelope->add_option("--field", field, "Field spec JSON, or @file");
    envelope->add_option("--profile", profile_csv, "Profile CSV with header r,v[,dv,ddv]");
    envelope->add_option("--center", center, "Circle center x1,x2");
    envelope->add_option("--grid", grid, "Radii r0:r1:n");
    envelope->add_option("--eps", eps, "Envelope parameter ε");
    envelope->add_option("--angles", angles, "Angular samples per circle");
    envelope->add_option("--out", out, "JSON report path");
    envelope->add_option("--csv-dir", csv_dir, "Directory for profile.csv and envelope.csv");
    envelope->add_flag("--dat", dat, "Also write gnuplot .dat files");

    std::string fname = "sigma2";
    double cone = 2.0, v0 = 2.0 * std::log(4.0), r_max = 5.0, rtol = 1e-8, atol = 1e-8;
    auto* solve = app.add_subcommand("solve-radial", "Shoot f(λ(A^u)) = 1 for radial u");
    solve->add_option("--f", fname, "sigma1 | sigma2 | weighted:t | registered name");
    solve->add_option("--cone", cone, "Cone index p in (1, 2]");
    solve->add_option("--v0", v0, "v(0)");
    solve->add_option("--r-max", r_max, "Outer radius");
    solve->add_option("--rtol", rtol, "Relative step tolerance");
    solve->add_option("--atol", atol, "Absolute step tolerance");
    solve->add_option("--out", out, "JSON report path");
    solve->add_option("--csv-dir", csv_dir, "Directory for solution.csv and profile.csv");
    solve->add_flag("--dat", dat, "Also write profile.dat");

    std::string ms_field = R"({"family":"bubble","params":{"a":1,"b":8}})", ms_x = "0,0";
    double lam_max = 10.0, ms_tol = 1e-3;
    auto* moving = app.add_subcommand("moving-spheres", "Critical radius of the moving-spheres transform");
    moving->add_option("--field", ms_field, "Field spec JSON, or @file");
    moving->add_option("--x", ms_x, "Center x1,x2");
    moving->add_option("--lam-max", lam_max, "Upper end of the λ search");
    moving->add_option("--tol", ms_tol, "Relative bisection tolerance");
    moving->add_option("--out", out, "JSON report path");
    moving->add_option("--csv-dir", csv_dir, "Directory for slack.csv");

    std::vector<std::string> inputs;
    auto* report = app.add_subcommand("report", "Summarize and merge existing JSON reports");
    report->add_option("inputs", inputs, "Report files")->required();
    report->add_option("--out", out, "Merged JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        if (*verify) {
            return run_verify(va, verify->count("--tol") > 0, verify->count("--seed") > 0,
                              verify->count("--suite") > 0);
        }
        if (*envelope) return run_envelope(field, profile_csv, center, grid, eps, angles, out, csv_dir, dat);
        if (*solve) return run_solve(fname, cone, v0, r_max, rtol, atol, out, csv_dir, dat);
        if (*moving) return run_moving(ms_field, ms_x, lam_max, ms_tol, out, csv_dir);
        if (*report) return run_report(inputs, out);
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFail;
    }
    return kConfig;
}
