#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "conformal2d/conformal_ops.hpp"
#include "conformal2d/fields.hpp"
#include "conformal2d/mobius.hpp"

namespace conformal2d {

struct Witness {
    Vec2 point;
    double error = 0.0;
};

/// Outcome of one property check over a sample set. pass ⇔ max_error ≤ tolerance.
struct CheckReport {
    std::string name;
    std::size_t points_tested = 0;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    std::vector<Witness> witnesses;         ///< worst points, descending error
    std::map<std::string, double> details;  ///< named sub-measurements

    /// Folds in one sample; keeps the five worst witnesses.
    void record(Vec2 point, double error);
    /// Recomputes `pass` from max_error and tolerance.
    void finalize();
    /// Max-merges another report's samples and details into this one.
    void merge(const CheckReport& other);
};

/// A^{u_ψ}(x) against Oᵀ(A^u∘ψ)O for a Möbius map, together with the tensor
/// identity e^v A^v = e^{u∘ψ} Jᵀ(A^u∘ψ)J and eigenvalue invariance. Errors are
/// entrywise max norms; the tensor error is relative to max(1, |rhs|).
CheckReport check_a_covariance(const ScalarField& u, const MobiusMap& m, std::span<const Vec2> pts, double tol);

/// The same comparison for an arbitrary holomorphic map, where covariance is
/// not expected to hold.
CheckReport check_a_covariance_general(const ScalarField& u, const HolomorphicMap& psi,
                                       std::span<const Vec2> pts, double tol);

/// −e^{−u_ψ}Δu_ψ against (−e^{−u}Δu)∘ψ.
CheckReport check_trace_conformal(const ScalarField& u, const HolomorphicMap& psi, std::span<const Vec2> pts,
                                  double tol);

/// B^{u_ψ}(z) against U*(B^u∘ψ)U, U = diag(1, ψ'/conj(ψ')). Throws
/// ConjugatingUnsupported for anti-holomorphic maps.
CheckReport check_b_covariance(const ScalarField& u, const MobiusMap& m, std::span<const Vec2> pts, double tol);

/// U*BU for U = diag(1, u22), |u22| = 1.
Herm2 unitary_conj(const Herm2& b, Complex u22);

struct CounterexampleResult {
    double a = 0.0, y = 0.0;
    Sym2 lhs;  ///< A^{u_ψ}(0, y) for u = a x1², ψ(z) = iz²
    Sym2 rhs;  ///< (A^u∘ψ)(0, y)
    bool trace_match = false;
    double eigen_gap = 0.0;          ///< max_i |λ_i(lhs) − λ_i(rhs)|
    double conjugation_error = 0.0;  ///< ‖lhs − Oᵀ rhs O‖∞ with O from J_ψ
};

/// Throws std::invalid_argument for y = 0.
CounterexampleResult counterexample_iz2(double a, double y);

}  // namespace conformal2d
