#pragma once

// Named verification suites. Each returns one CheckReport per sub-check; a
// suite passes when all of its reports pass.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conformal2d/fields.hpp"
#include "conformal2d/invariance.hpp"

namespace conformal2d {

struct SuiteOptions {
    std::uint64_t seed = 7;
    std::optional<double> tol;  ///< overrides the covariance and trace tolerances
    std::size_t maps = 20;
    std::size_t points = 50;
};

/// The ten fields of the covariance sweep: bubbles, Chen–Li solutions,
/// Liouville fields of polynomials, and Möbius pullbacks.
std::vector<ScalarField> covariance_fields();

/// "covariance", "b-covariance", "counterexample", "trace", "liouville",
/// "chen-li", "bubble", "cross-representation", "moving-spheres", "envelope",
/// "monotonicity", "radial-solver".
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws ConfigError for unknown names.
std::vector<CheckReport> run_suite(const std::string& name, const SuiteOptions& opts = {});

/// κ for Bubble(a, b): A^u = κ I with κ = b/(2a²).
double bubble_kappa(double a, double b);

}  // namespace conformal2d
