#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "conformal2d/conformal_ops.hpp"
#include "conformal2d/fields.hpp"
#include "conformal2d/invariance.hpp"
#include "conformal2d/profile.hpp"

namespace conformal2d {

/// v(r_i) = min over the circle |x − center| = r_i of u, from `angular_samples`
/// equispaced angles refined by a Brent search around the best sample.
/// Throws DomainError if a circle meets an excluded point.
RadialProfile minimize_on_circles(const ScalarField& u, Vec2 center, std::span<const double> radii,
                                  int angular_samples = 64);

struct EnvelopeResult {
    RadialProfile profile;
    double epsilon = 0.0;
    /// Largest positive second difference of ũ − r²/ε on the interior.
    double semiconcavity_defect = 0.0;
    /// max |ũ − v| on the interior.
    double sup_distance_to_input = 0.0;
    /// Interior index range [interior_begin, interior_end): grid points at
    /// distance ≥ sqrt(ε · osc v) from the outer edge, and from the inner edge
    /// when it is not the origin.
    std::size_t interior_begin = 0, interior_end = 0;
};

/// ũ(r_i) = min_j v(r_j) + (r_j − r_i)²/ε by brute force over the grid.
/// Throws std::invalid_argument for ε ≤ 0 or an invalid profile.
EnvelopeResult inf_envelope(const RadialProfile& p, double eps);

struct RadialLambda {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

/// Eigenvalues of A for u(x) = v(|x|) from (v, v', v'') at radius r:
/// λ1 = e^{−v}(−v'' + ¼v'²), λ2 = e^{−v}(−v'/r − ¼v'²). At r = 0 the limit
/// λ2 = λ1 is used and v' must vanish. Throws std::invalid_argument for r < 0.
RadialLambda radial_lambda(double v, double v1, double v2, double r);

/// Checks that v(r) + 4 ln r is nondecreasing (increments ≥ −1e-10) for r > k0.
/// details: "empirical_k0" (smallest grid radius after which no violation
/// occurs), "min_increment".
CheckReport check_monotone_4log(const RadialProfile& p, double k0);

struct OdeConfig {
    double rtol = 1e-8;
    double atol = 1e-8;
    double h_init = 1e-3;
    double h_min = 1e-12;
    double h_max = 0.05;
    double series_radius = 1e-3;  ///< Taylor start used below this radius
    double root_residual = 1e-11;  ///< steps whose λ1 solve misses f = 1 by more are rejected
    std::size_t max_steps = 2'000'000;
};

/// Sampled solution with per-point eigenvalues and the residual |f(λ) − 1|
/// (or |λ2 + sλ1| for the boundary equation) recomputed from (v, v', v'').
struct RadialSolution {
    RadialProfile profile;
    std::vector<double> lambda1, lambda2, residual;
    std::optional<double> cone_exit;  ///< first radius where λ leaves the cone
    std::optional<double> blowup;     ///< radius where v' diverges
    double mu = 0.0;                  ///< diagonal seed f(μ, μ) = 1; NaN for solves not started at 0
    std::size_t rejected_steps = 0;

    double max_residual() const;
};

/// Positive root of f(μ, μ) = 1. Throws SeedError if none is found.
double diagonal_seed(const SymmetricFunction& f);

/// Solves f(λ1, λ2) = 1 for λ1 given λ2 inside f's cone. Returns nullopt when
/// no root lies in the cone; throws StepFailure if the bracket cannot be grown.
std::optional<double> solve_lambda1(const SymmetricFunction& f, double lambda2);

/// Shoots f(λ(A^u)) = 1 for u = v(|x|) from v(0) = v0, v'(0) = 0 to r_max.
/// Integration stops at the first radius where λ leaves Γ_p.
RadialSolution ode_solve(const SymmetricFunction& f, const ConeIndex& p, double v0, double r_max,
                         const OdeConfig& cfg = {});

/// Same equation started from (r0 > 0, v, v').
RadialSolution ode_solve_from(const SymmetricFunction& f, const ConeIndex& p, double r0, double v0, double dv0,
                              double r_max, const OdeConfig& cfg = {});

/// Radial solutions of the boundary equation λ2 = (p − 2)λ1 for p < 2:
/// v'' = ¼v'² − (v'/r + ¼v'²)/s with s = 2 − p. Stops at blowup.
RadialSolution solve_cone_boundary(const ConeIndex& p, double r0, double v0, double dv0, double r_max,
                                   const OdeConfig& cfg = {});

/// g = 1/v' + r/4 and k = r^{−1/s} g with derivatives, sampled on the set
/// where v' < −4/r.
struct EtildeDiagnostics {
    std::vector<double> r, g, dg, k, dk;
    bool g_positive = true;
    bool g_increasing = true;
    bool k_nondecreasing = true;
    double min_g = 0.0, min_dg = 0.0, min_dk = 0.0;  ///< minima over the sampled set
    double k_spread = 0.0;                           ///< (max k − min k) / max |k|
};

/// Requires profile derivatives and p < 2. `tol` is the relative slack allowed
/// in k' ≥ 0, measured against the two terms of k' = r^{−1/s}(g' − g/(sr)).
EtildeDiagnostics etilde_diagnostics(const RadialProfile& p, const ConeIndex& cone, double tol = 1e-9);

}  // namespace conformal2d
