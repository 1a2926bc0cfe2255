#pragma once

#include <span>
#include <vector>

#include "conformal2d/fields.hpp"
#include "conformal2d/geometry.hpp"

namespace conformal2d {

/// u_{x,λ}(y) = u(x + λ²(y − x)/|y − x|²) − 4 ln(|y − x|/λ), built as the
/// pullback of u through the sphere inversion. Throws std::invalid_argument
/// for λ ≤ 0.
ScalarField ms_transform(const ScalarField& u, Vec2 x, double lambda);

/// Sample layout for the λ̄ predicate and the equality residual.
struct SphereSampling {
    int radii = 96;   ///< log-spaced radii in [λ, max(100, 10λ)]
    int angles = 64;
    double slack_tol = 1e-9;  ///< predicate accepts u − u_{x,λ} ≥ −slack_tol·(1 + |u|)
    double equality_inner = 0.1;
    double equality_outer = 10.0;
    int equality_radii = 64;
};

struct MovingSphereReport {
    Vec2 x;
    double lambda_bar = 0.0;  ///< largest λ found admissible; lam_max when unbounded
    bool unbounded = false;
    double min_slack = 0.0;          ///< min of u − u_{x,λ̄} over the predicate samples
    double equality_residual = 0.0;  ///< sup |u_{x,λ̄} − u| on the equality annulus around x
    int bisection_steps = 0;
};

/// Bisection for λ̄(x) = sup{μ : u_{x,λ} ≤ u on |y − x| ≥ λ for all λ < μ} on
/// (0, lam_max], to relative tolerance `tol`. Throws DomainError when no
/// admissible λ is found above 1e-12·lam_max.
MovingSphereReport critical_lambda(const ScalarField& u, Vec2 x, double lam_max, double tol = 1e-3,
                                   const SphereSampling& sampling = {});

struct BubbleFit {
    double a = 0.0, b = 0.0;
    Vec2 center;
    double residual = 0.0;  ///< sup |u − bubble| over the validation set
    int iterations = 0;
    bool is_bubble(double threshold = 1e-2) const { return residual <= threshold; }
};

/// Levenberg–Marquardt fit of 2 ln(8a/(8|x − c|² + b)) in (ln a, ln b, c),
/// started from the sample maximum. Throws std::invalid_argument for fewer
/// than four samples and FitDiverged when the validation residual exceeds
/// 1e3 times its starting value.
BubbleFit bubble_fit(std::span<const Vec2> points, std::span<const double> values,
                     std::span<const Vec2> validation_points, std::span<const double> validation_values);

/// Samples u at `points` and `validation` and fits.
BubbleFit bubble_fit(const ScalarField& u, std::span<const Vec2> points, std::span<const Vec2> validation);

/// Extrapolated liminf of u + 4 ln|x − x0|, from w(r) = min_{|x−x0|=r} u + 4 ln r
/// on the given radii fitted as α + β r⁻² over the outer half of the grid.
struct AlphaEstimate {
    double alpha = 0.0;
    double beta = 0.0;
    double last_value = 0.0;
    double tail_slope = 0.0;  ///< dw/d(ln r) between the last two radii
    std::vector<double> r, w;
};

AlphaEstimate estimate_alpha(const ScalarField& u, Vec2 x0, std::span<const double> radii);

}  // namespace conformal2d
