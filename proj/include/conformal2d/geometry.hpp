#pragma once

// Small exact linear algebra in the plane: points, 2x2 real matrices,
// symmetric matrices with closed-form spectra, and orthogonal conjugation.

#include <array>
#include <cmath>
#include <complex>

namespace conformal2d {

using Complex = std::complex<double>;

struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double a, double b) : x1(a), x2(b) {}

    static Vec2 from_complex(Complex z) { return {z.real(), z.imag()}; }
    Complex to_complex() const { return {x1, x2}; }

    double norm() const { return std::hypot(x1, x2); }
    constexpr double norm2() const { return x1 * x1 + x2 * x2; }
    bool finite() const { return std::isfinite(x1) && std::isfinite(x2); }

    constexpr Vec2 operator+(Vec2 o) const { return {x1 + o.x1, x2 + o.x2}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x1 - o.x1, x2 - o.x2}; }
    constexpr Vec2 operator-() const { return {-x1, -x2}; }
    constexpr Vec2 operator*(double s) const { return {s * x1, s * x2}; }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }

/// General real 2x2 matrix, row-major: [[a11, a12], [a21, a22]].
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 rotation(double theta) {
        const double c = std::cos(theta), s = std::sin(theta);
        return {c, -s, s, c};
    }

    constexpr double det() const { return a11 * a22 - a12 * a21; }
    constexpr Mat2 transpose() const { return {a11, a21, a12, a22}; }
    constexpr Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    constexpr Mat2 operator*(double s) const { return {s * a11, s * a12, s * a21, s * a22}; }
    constexpr Vec2 operator*(Vec2 v) const {
        return {a11 * v.x1 + a12 * v.x2, a21 * v.x1 + a22 * v.x2};
    }
    constexpr Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    double max_abs() const {
        return std::max(std::max(std::abs(a11), std::abs(a12)),
                        std::max(std::abs(a21), std::abs(a22)));
    }
};

/// Real symmetric 2x2 matrix; the single off-diagonal entry is a12 = a21.
struct Sym2 {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;

    static constexpr Sym2 identity() { return {1.0, 0.0, 1.0}; }
    static constexpr Sym2 diag(double d1, double d2) { return {d1, 0.0, d2}; }
    static constexpr Sym2 outer(Vec2 g) { return {g.x1 * g.x1, g.x1 * g.x2, g.x2 * g.x2}; }
    /// Symmetric part of a general matrix.
    static constexpr Sym2 from(const Mat2& m) { return {m.a11, 0.5 * (m.a12 + m.a21), m.a22}; }

    constexpr double trace() const { return a11 + a22; }
    constexpr double det() const { return a11 * a22 - a12 * a12; }
    constexpr Mat2 as_mat() const { return {a11, a12, a12, a22}; }
    bool finite() const { return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a22); }
    double max_abs() const {
        return std::max(std::abs(a11), std::max(std::abs(a12), std::abs(a22)));
    }

    constexpr Sym2 operator+(const Sym2& o) const { return {a11 + o.a11, a12 + o.a12, a22 + o.a22}; }
    constexpr Sym2 operator-(const Sym2& o) const { return {a11 - o.a11, a12 - o.a12, a22 - o.a22}; }
    constexpr Sym2 operator-() const { return {-a11, -a12, -a22}; }
    constexpr Sym2 operator*(double s) const { return {s * a11, s * a12, s * a22}; }
    constexpr Vec2 operator*(Vec2 v) const {
        return {a11 * v.x1 + a12 * v.x2, a12 * v.x1 + a22 * v.x2};
    }
    constexpr bool operator==(const Sym2&) const = default;
};

constexpr Sym2 operator*(double s, const Sym2& m) { return m * s; }

/// Entrywise max-norm of a difference.
inline double max_abs_diff(const Sym2& a, const Sym2& b) { return (a - b).max_abs(); }

/// Real orthogonal 2x2 matrix. Construction checks OᵀO = I.
class Orthogonal2 {
public:
    static constexpr double kDefectTolerance = 1e-9;

    Orthogonal2() = default;
    /// Throws std::invalid_argument when max|OᵀO − I| exceeds kDefectTolerance.
    explicit Orthogonal2(const Mat2& m);

    static Orthogonal2 rotation(double theta) { return Orthogonal2(Mat2::rotation(theta)); }
    /// Reflection across the x1-axis, diag(1, -1).
    static Orthogonal2 reflection() { return Orthogonal2(Mat2{1.0, 0.0, 0.0, -1.0}); }

    const Mat2& matrix() const { return m_; }
    double det() const { return m_.det(); }
    /// max|OᵀO − I| of the stored matrix.
    double defect() const;

private:
    Mat2 m_ = Mat2::identity();
};

/// Eigenvalues of a symmetric 2x2 matrix, sorted descending.
struct EigenPair {
    double lambda1 = 0.0;
    double lambda2 = 0.0;

    constexpr double sum() const { return lambda1 + lambda2; }
    constexpr double product() const { return lambda1 * lambda2; }
};

/// Closed-form spectrum: mean ± sqrt(((a11 − a22)/2)² + a12²). Throws
/// std::invalid_argument on non-finite entries.
EigenPair eig2(const Sym2& m);

/// Returns OᵀMO.
Sym2 conj_orth(const Sym2& m, const Orthogonal2& o);

/// Returns OᵀMO for an arbitrary matrix O (no orthogonality check).
Sym2 congruence(const Sym2& m, const Mat2& o);

}  // namespace conformal2d
