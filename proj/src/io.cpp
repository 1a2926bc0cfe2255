#include "conformal2d/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "conformal2d/errors.hpp"

namespace conformal2d {

namespace {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const char* what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(std::string("expected [re, im] for '") + what + "'");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Vec2 vec_from_json(const Json& j, const char* what) {
    const Complex z = complex_from_json(j, what);
    return {z.real(), z.imag()};
}

double number(const Json& params, const char* key, std::optional<double> fallback = std::nullopt) {
    if (!params.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError(std::string("missing parameter '") + key + "'");
    }
    if (!params[key].is_number()) throw ConfigError(std::string("parameter '") + key + "' must be a number");
    return params[key].get<double>();
}

Vec2 point(const Json& params, const char* key) {
    return params.contains(key) ? vec_from_json(params[key], key) : Vec2{};
}

}  // namespace

Json mobius_to_json(const MobiusMap& m) {
    return {{"a", complex_to_json(m.a())},
            {"b", complex_to_json(m.b())},
            {"c", complex_to_json(m.c())},
            {"d", complex_to_json(m.d())},
            {"conjugating", m.conjugating()}};
}

MobiusMap mobius_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("map spec must be an object");
    for (const char* k : {"a", "b", "c", "d"}) {
        if (!j.contains(k)) throw ConfigError(std::string("map spec missing '") + k + "'");
    }
    const bool conj = j.value("conjugating", false);
    try {
        return {complex_from_json(j["a"], "a"), complex_from_json(j["b"], "b"), complex_from_json(j["c"], "c"),
                complex_from_json(j["d"], "d"), conj};
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

HolomorphicMap holomorphic_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ConfigError("holomorphic map spec needs 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "identity") return HolomorphicMap::identity();
    if (kind == "exp") return HolomorphicMap::exp();
    if (kind == "polynomial") {
        if (!j.contains("coefficients") || !j["coefficients"].is_array() || j["coefficients"].empty()) {
            throw ConfigError("polynomial needs a nonempty 'coefficients' array");
        }
        std::vector<Complex> c;
        for (const auto& x : j["coefficients"]) c.push_back(complex_from_json(x, "coefficients"));
        try {
            return HolomorphicMap::polynomial(std::move(c));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (kind == "mobius") {
        if (!j.contains("map")) throw ConfigError("mobius kind needs 'map'");
        try {
            return HolomorphicMap::mobius(mobius_from_json(j["map"]));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    throw ConfigError("unknown holomorphic map kind '" + kind + "'");
}

ScalarField field_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
        throw ConfigError("field spec needs a string 'family'");
    }
    const std::string fam = j["family"].get<std::string>();
    const Json params = j.value("params", Json::object());
    if (!params.is_object()) throw ConfigError("field 'params' must be an object");
    try {
        if (fam == "bubble") return ScalarField::bubble(number(params, "a"), number(params, "b"), point(params, "center"));
        if (fam == "chen_li") return ScalarField::chen_li(number(params, "a"), point(params, "center"));
        if (fam == "liouville") {
            if (!params.contains("f")) throw ConfigError("liouville needs 'f'");
            return ScalarField::liouville(holomorphic_from_json(params["f"]));
        }
        if (fam == "exp_example") return ScalarField::exp_example();
        if (fam == "quadratic") return ScalarField::quadratic(number(params, "a"));
        if (fam == "constant") return ScalarField::constant(number(params, "c"));
        if (fam == "affine") return ScalarField::affine(number(params, "c", 0.0), point(params, "g"));
        if (fam == "radial") {
            if (!params.contains("csv") || !params["csv"].is_string()) throw ConfigError("radial needs 'csv' path");
            return ScalarField::radial(read_profile_csv(params["csv"].get<std::string>()), point(params, "center"));
        }
        if (fam == "pullback") {
            if (!params.contains("field") || !params.contains("map")) throw ConfigError("pullback needs 'field' and 'map'");
            return pullback(field_from_json(params["field"]), mobius_from_json(params["map"]));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError("field '" + fam + "': " + e.what());
    } catch (const Json::exception& e) {
        throw ConfigError("field '" + fam + "': " + e.what());
    }
    throw ConfigError("unknown field family '" + fam + "'");
}

Json to_json(const CheckReport& r) {
    Json w = Json::array();
    for (const auto& x : r.witnesses) w.push_back({{"point", {x.point.x1, x.point.x2}}, {"error", x.error}});
    Json details = Json::object();
    for (const auto& [k, v] : r.details) details[k] = v;
    return {{"name", r.name},         {"points_tested", r.points_tested}, {"max_error", r.max_error},
            {"tolerance", r.tolerance}, {"pass", r.pass},                   {"witnesses", w},
            {"details", details}};
}

Json make_report(const std::vector<CheckReport>& checks, std::uint64_t seed, const Json& extra) {
    Json list = Json::array();
    bool pass = true;
    for (const auto& c : checks) {
        list.push_back(to_json(c));
        pass = pass && c.pass;
    }
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    Json report = {{"schema", kReportSchema},
                   {"seed", seed},
                   {"pass", pass},
                   {"checks", list},
                   {"environment", {{"compiler", __VERSION__}, {"cxx_standard", static_cast<long>(__cplusplus)}}},
                   {"metadata", {{"timestamp", stamp}}}};
    for (const auto& [k, v] : extra.items()) report[k] = v;
    return report;
}

Json strip_metadata(Json report) {
    report.erase("metadata");
    return report;
}

void write_json(const Json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("'" + path.string() + "': " + e.what());
    }
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

void write_profile_csv(const RadialProfile& p, const std::filesystem::path& path) {
    auto out = open_out(path);
    const bool d = p.dv.size() == p.size() && p.ddv.size() == p.size();
    out << (d ? "r,v,dv,ddv\n" : "r,v\n");
    for (std::size_t i = 0; i < p.size(); ++i) {
        out << format_double(p.r[i]) << ',' << format_double(p.v[i]);
        if (d) out << ',' << format_double(p.dv[i]) << ',' << format_double(p.ddv[i]);
        out << '\n';
    }
    finish(out, path);
}

RadialProfile read_profile_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("'" + path.string() + "': empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t cols;
    if (line == "r,v") {
        cols = 2;
    } else if (line == "r,v,dv,ddv") {
        cols = 4;
    } else {
        throw ConfigError("'" + path.string() + "': header must be 'r,v' or 'r,v,dv,ddv'");
    }
    RadialProfile p;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
                if (used != cell.size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw ConfigError("'" + path.string() + "' line " + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
        }
        if (row.size() != cols) {
            throw ConfigError("'" + path.string() + "' line " + std::to_string(lineno) + ": expected " +
                              std::to_string(cols) + " columns");
        }
        p.r.push_back(row[0]);
        p.v.push_back(row[1]);
        if (cols == 4) {
            p.dv.push_back(row[2]);
            p.ddv.push_back(row[3]);
        }
    }
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("'" + path.string() + "': " + e.what());
    }
    return p;
}

void write_solution_csv(const RadialSolution& s, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "r,v,dv,lambda1,lambda2,residual\n";
    for (std::size_t i = 0; i < s.profile.size(); ++i) {
        out << format_double(s.profile.r[i]) << ',' << format_double(s.profile.v[i]) << ','
            << format_double(s.profile.dv[i]) << ',' << format_double(s.lambda1[i]) << ','
            << format_double(s.lambda2[i]) << ',' << format_double(s.residual[i]) << '\n';
    }
    finish(out, path);
}

void write_profile_dat(const RadialProfile& p, const std::filesystem::path& path) {
    auto out = open_out(path);
    const bool d = p.dv.size() == p.size() && p.ddv.size() == p.size();
    out << (d ? "# r v dv ddv\n" : "# r v\n");
    for (std::size_t i = 0; i < p.size(); ++i) {
        out << format_double(p.r[i]) << ' ' << format_double(p.v[i]);
        if (d) out << ' ' << format_double(p.dv[i]) << ' ' << format_double(p.ddv[i]);
        out << '\n';
    }
    finish(out, path);
}

}  // namespace conformal2d
