#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace conformal2d {

/// Sampled radial function v(r) on a strictly increasing grid r ≥ 0, with
/// optional first and second derivative samples.
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> v;
    std::vector<double> dv;   ///< empty or same size as r
    std::vector<double> ddv;  ///< empty or same size as r

    std::size_t size() const { return r.size(); }
    bool has_derivatives() const { return !dv.empty(); }

    /// Throws std::invalid_argument unless the grid is strictly increasing,
    /// nonnegative, at least two points long, and all values are finite.
    void validate() const;
};

/// `n` equispaced points on [r0, r1].
std::vector<double> linspace(double r0, double r1, std::size_t n);

/// C² natural cubic spline through (x_i, y_i).
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    struct Eval {
        double value, d1, d2;
    };
    /// Throws std::out_of_range outside [x_0, x_n].
    Eval operator()(double t) const;

    double front() const { return x_.front(); }
    double back() const { return x_.back(); }

private:
    std::vector<double> x_, y_, m_;  // m_: second derivatives at the knots
};

/// Spline of v(r) on the profile grid. When the grid starts at r = 0 the data
/// are mirrored to negative radii first, which makes the interpolant even and
/// forces v'(0) = 0.
class RadialSpline {
public:
    explicit RadialSpline(const RadialProfile& profile);

    CubicSpline::Eval operator()(double r) const;
    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }
    bool includes_origin() const { return origin_; }

private:
    CubicSpline spline_;
    double r_min_ = 0.0, r_max_ = 0.0;
    bool origin_ = false;
};

}  // namespace conformal2d
