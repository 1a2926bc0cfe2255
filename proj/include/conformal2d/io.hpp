#pragma once

// JSON and CSV formats: map and field specifications, check reports, and
// radial profiles.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "conformal2d/fields.hpp"
#include "conformal2d/invariance.hpp"
#include "conformal2d/mobius.hpp"
#include "conformal2d/profile.hpp"
#include "conformal2d/radial.hpp"

namespace conformal2d {

using Json = nlohmann::json;

inline constexpr const char* kReportSchema = "conformal2d/1";

/// {"a": [re, im], "b": ..., "c": ..., "d": ..., "conjugating": bool}
Json mobius_to_json(const MobiusMap& m);
/// Throws ConfigError on missing or malformed entries.
MobiusMap mobius_from_json(const Json& j);

/// Builds a field from {"family": name, "params": {...}}. Families:
///   bubble {a, b, center}, chen_li {a, center}, liouville {f},
///   exp_example, quadratic {a}, constant {c}, affine {c, g},
///   radial {csv, center}, pullback {field, map}.
/// Holomorphic f: {"kind": "identity" | "exp" | "polynomial", "coefficients": [[re, im], ...]}
/// or {"kind": "mobius", "map": {...}}. Throws ConfigError.
ScalarField field_from_json(const Json& j);
HolomorphicMap holomorphic_from_json(const Json& j);

Json to_json(const CheckReport& r);

/// Report document: schema, seed, checks, overall pass flag, and a separate
/// "metadata" object holding the timestamp.
Json make_report(const std::vector<CheckReport>& checks, std::uint64_t seed, const Json& extra = Json::object());
/// The report with "metadata" removed, for byte-level comparisons.
Json strip_metadata(Json report);

/// Writes `j` with two-space indentation. Throws IoError.
void write_json(const Json& j, const std::filesystem::path& path);
/// Throws IoError or ConfigError for unreadable or malformed files.
Json read_json(const std::filesystem::path& path);

/// CSV with header "r,v[,dv,ddv]"; 17 significant digits.
void write_profile_csv(const RadialProfile& p, const std::filesystem::path& path);
/// Reads "r,v[,dv,ddv]" CSV. Throws IoError or ConfigError.
RadialProfile read_profile_csv(const std::filesystem::path& path);
/// CSV with header "r,v,dv,lambda1,lambda2,residual".
void write_solution_csv(const RadialSolution& s, const std::filesystem::path& path);
/// Whitespace-separated columns with a '#' header line, for gnuplot.
void write_profile_dat(const RadialProfile& p, const std::filesystem::path& path);

/// Shortest round-trip decimal form with 17 significant digits.
std::string format_double(double x);

}  // namespace conformal2d
