#include "conformal2d/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conformal2d {

void RadialProfile::validate() const {
    if (r.size() < 2) throw std::invalid_argument("RadialProfile: need at least two grid points");
    if (v.size() != r.size()) throw std::invalid_argument("RadialProfile: r and v differ in length");
    if (!dv.empty() && dv.size() != r.size()) throw std::invalid_argument("RadialProfile: dv length mismatch");
    if (!ddv.empty() && ddv.size() != r.size()) throw std::invalid_argument("RadialProfile: ddv length mismatch");
    if (!(r.front() >= 0.0)) throw std::invalid_argument("RadialProfile: radii must be nonnegative");
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!std::isfinite(r[i]) || !std::isfinite(v[i])) {
            throw std::invalid_argument("RadialProfile: non-finite sample");
        }
        if (i > 0 && !(r[i] > r[i - 1])) throw std::invalid_argument("RadialProfile: grid not strictly increasing");
    }
}

std::vector<double> linspace(double r0, double r1, std::size_t n) {
    if (n < 2) throw std::invalid_argument("linspace: need at least two points");
    std::vector<double> out(n);
    const double h = (r1 - r0) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = r0 + h * static_cast<double>(i);
    out.back() = r1;
    return out;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("CubicSpline: need matching samples, n >= 2");
    m_.assign(n, 0.0);
    if (n == 2) return;
    // Tridiagonal system for interior second derivatives (natural ends).
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    // Thomas algorithm on rows 1..n-2; lower coefficient of row i is h_{i-1}.
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double lower = x_[i] - x_[i - 1];
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

CubicSpline::Eval CubicSpline::operator()(double t) const {
    if (!(t >= x_.front() && t <= x_.back())) throw std::out_of_range("CubicSpline: argument outside knots");
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = static_cast<std::size_t>(std::distance(x_.begin(), it));
    i = std::clamp<std::size_t>(i, 1, x_.size() - 1) - 1;
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h, b = (t - x_[i]) / h;
    const double value = a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    const double d1 = (y_[i + 1] - y_[i]) / h + ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
    const double d2 = a * m_[i] + b * m_[i + 1];
    return {value, d1, d2};
}

RadialSpline::RadialSpline(const RadialProfile& profile) {
    profile.validate();
    r_min_ = profile.r.front();
    r_max_ = profile.r.back();
    origin_ = (r_min_ == 0.0);
    if (!origin_) {
        spline_ = CubicSpline(profile.r, profile.v);
        return;
    }
    const std::size_t n = profile.size();
    std::vector<double> x(2 * n - 1), y(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        x[n - 1 - i] = -profile.r[i];
        y[n - 1 - i] = profile.v[i];
        x[n - 1 + i] = profile.r[i];
        y[n - 1 + i] = profile.v[i];
    }
    spline_ = CubicSpline(std::move(x), std::move(y));
}

CubicSpline::Eval RadialSpline::operator()(double r) const { return spline_(r); }

}  // namespace conformal2d
