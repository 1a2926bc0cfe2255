#include "conformal2d/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace conformal2d {

Orthogonal2::Orthogonal2(const Mat2& m) : m_(m) {
    if (!(defect() <= kDefectTolerance)) {
        throw std::invalid_argument("Orthogonal2: matrix is not orthogonal (defect " +
                                    std::to_string(defect()) + ")");
    }
}

double Orthogonal2::defect() const {
    return (m_.transpose() * m_ - Mat2::identity()).max_abs();
}

EigenPair eig2(const Sym2& m) {
    if (!m.finite()) throw std::invalid_argument("eig2: non-finite matrix entry");
    const double mean = 0.5 * (m.a11 + m.a22);
    const double radius = std::hypot(0.5 * (m.a11 - m.a22), m.a12);
    // The eigenvalue of larger magnitude is formed without cancellation; the
    // other follows from the determinant.
    double big = mean >= 0.0 ? mean + radius : mean - radius;
    double small = 0.0;
    if (big != 0.0) {
        small = m.det() / big;
    }
    EigenPair e{std::max(big, small), std::min(big, small)};
    return e;
}

Sym2 congruence(const Sym2& m, const Mat2& o) {
    const Mat2 r = o.transpose() * m.as_mat() * o;
    return Sym2::from(r);
}

Sym2 conj_orth(const Sym2& m, const Orthogonal2& o) { return congruence(m, o.matrix()); }

}  // namespace conformal2d
