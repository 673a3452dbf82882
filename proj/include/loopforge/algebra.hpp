#ifndef LOOPFORGE_ALGEBRA_HPP
#define LOOPFORGE_ALGEBRA_HPP

#include <span>

#include "loopforge/constants.hpp"
#include "loopforge/laurent.hpp"

namespace loopforge {

/// Bilinear-form laws for group membership residuals.
enum class MembershipLaw {
    G2m,   // X^t J X = J with J the antidiagonal pairing
    SO1q,  // X^t diag(-1,1,...,1) X = diag(-1,1,...,1)
    SOn,   // X^t X = I
};

/// Frobenius norm of X^t M X - M for the law's bilinear form M (sized to X).
double membership_residual(const CMatrix& X, MembershipLaw law);

/// Reality involution on constant matrices: X -> S conj(X) S.
CMatrix tau_hat(const CMatrix& X, const ConstantSet& C);

/// Reality involution on loops; the lambda^k coefficient of the result is
/// S * conj(coeff_{-k}) * S.
LaurentLoop tau_hat(const LaurentLoop& L, const ConstantSet& C);

/// Inverse of tau_hat(L) computed coefficient-wise as Jhat conj(coeff)^t Jhat
/// with degree negation; requires L to take values in the J-orthogonal group
/// on the unit circle (residual checked at sampled lambda).
LaurentLoop tau_hat_inverse(const LaurentLoop& L, const ConstantSet& C,
                            double membership_tol = 1e-8);

/// max over samples of || L(-lambda) - D0 L(lambda) D0^{-1} ||_F.
double sigma_twist_residual(const LaurentLoop& L, const ConstantSet& C,
                            std::span<const Complex> lambda_samples);

enum class ConjugateDirection { Forward, Backward };

/// Forward: Ptilde^{-1} X Ptilde (the group isometry); backward is its inverse.
CMatrix conjugate_P(const CMatrix& X, const ConstantSet& C, ConjugateDirection dir);
LaurentLoop conjugate_P(const LaurentLoop& L, const ConstantSet& C, ConjugateDirection dir);

/// Closed-form inverse of W = I + lambda^{-1} W1 + lambda^{-2} W2 where W1 is
/// strictly block upper triangular in the (2, 2m-4, 2) partition and W2 sits
/// in the top-right 2x2 corner: returns I - lambda^{-1} W1 + lambda^{-2} (W1^2 - W2).
/// Throws ShapeViolation if the nilpotency pattern fails structurally.
LaurentLoop nilpotent_inverse(const LaurentLoop& W, const ConstantSet& C);

} // namespace loopforge

#endif
