#include "loopforge/algebra.hpp"

#include <cmath>
#include <string>

namespace loopforge {

namespace {

CMatrix law_form(MembershipLaw law, int n) {
    switch (law) {
        case MembershipLaw::G2m: {
            CMatrix J = CMatrix::zero(n, n);
            for (int k = 0; k < n; ++k) J(k, n - 1 - k) = 1.0;
            return J;
        }
        case MembershipLaw::SO1q: {
            CMatrix M = CMatrix::identity(n);
            M(0, 0) = -1.0;
            return M;
        }
        case MembershipLaw::SOn: return CMatrix::identity(n);
    }
    throw Error("membership_residual: unknown law");
}

} // namespace

double membership_residual(const CMatrix& X, MembershipLaw law) {
    if (!X.is_square()) throw DimensionMismatch("membership_residual: X not square");
    CMatrix M = law_form(law, X.rows());
    return (X.transpose() * M * X - M).norm();
}

CMatrix tau_hat(const CMatrix& X, const ConstantSet& C) {
    if (X.rows() != C.dim() || X.cols() != C.dim())
        throw DimensionMismatch("tau_hat: size mismatch with constant set");
    return C.S * X.conjugate() * C.S;
}

LaurentLoop tau_hat(const LaurentLoop& L, const ConstantSet& C) {
    if (L.size() != C.dim()) throw DimensionMismatch("tau_hat: loop size mismatch");
    LaurentLoop out(L.size());
    for (const auto& [k, M] : L.coeffs()) out.set_coeff(-k, C.S * M.conjugate() * C.S);
    return out;
}

LaurentLoop tau_hat_inverse(const LaurentLoop& L, const ConstantSet& C,
                            double membership_tol) {
    if (L.size() != C.dim()) throw DimensionMismatch("tau_hat_inverse: loop size mismatch");
    static const Complex samples[] = {Complex(1, 0), Complex(0, 1), Complex(-1, 0),
                                      Complex(std::sqrt(0.5), std::sqrt(0.5))};
    for (Complex lam : samples) {
        double r = membership_residual(L.eval(lam), MembershipLaw::G2m);
        if (r > membership_tol)
            throw MembershipViolation("tau_hat_inverse: loop leaves the J-orthogonal group, residual " +
                                      std::to_string(r));
    }
    LaurentLoop out(L.size());
    for (const auto& [k, M] : L.coeffs())
        out.set_coeff(-k, C.Jhat * M.conjugate().transpose() * C.Jhat);
    return out;
}

double sigma_twist_residual(const LaurentLoop& L, const ConstantSet& C,
                            std::span<const Complex> lambda_samples) {
    if (L.size() != C.dim()) throw DimensionMismatch("sigma_twist_residual: size mismatch");
    double worst = 0.0;
    for (Complex lam : lambda_samples) {
        CMatrix lhs = L.eval(-lam);
        CMatrix rhs = C.D0 * L.eval(lam) * C.D0; // D0 is its own inverse
        worst = std::max(worst, (lhs - rhs).norm());
    }
    return worst;
}

CMatrix conjugate_P(const CMatrix& X, const ConstantSet& C, ConjugateDirection dir) {
    if (X.rows() != C.dim() || X.cols() != C.dim())
        throw DimensionMismatch("conjugate_P: size mismatch");
    if (dir == ConjugateDirection::Forward) return C.Ptilde_inv * X * C.Ptilde;
    return C.Ptilde * X * C.Ptilde_inv;
}

LaurentLoop conjugate_P(const LaurentLoop& L, const ConstantSet& C, ConjugateDirection dir) {
    if (L.size() != C.dim()) throw DimensionMismatch("conjugate_P: loop size mismatch");
    LaurentLoop out(L.size());
    for (const auto& [k, M] : L.coeffs()) out.set_coeff(k, conjugate_P(M, C, dir));
    return out;
}

LaurentLoop nilpotent_inverse(const LaurentLoop& W, const ConstantSet& C) {
    const int N = C.dim();
    if (W.size() != N) throw DimensionMismatch("nilpotent_inverse: loop size mismatch");
    if (W.min_degree() < -2 || W.max_degree() > 0)
        throw ShapeViolation("nilpotent_inverse: degrees outside [-2, 0]");

    const CMatrix I = CMatrix::identity(N);
    const CMatrix W1 = W.coeff(-1);
    const CMatrix W2 = W.coeff(-2);
    const double scale = 1.0 + W1.norm() + W2.norm();
    const double tol = 1e-13 * scale;

    if ((W.coeff(0) - I).norm() > tol)
        throw ShapeViolation("nilpotent_inverse: constant term is not the identity");

    // W1 may live only in blocks (1,2) and (2,3) of the (2, 2m-4, 2) partition;
    // W2 only in block (1,3).
    auto off_pattern = [&](const CMatrix& M, bool allow_12, bool allow_23, bool allow_13) {
        double worst = 0.0;
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) {
                const int bi = i < 2 ? 0 : (i < N - 2 ? 1 : 2);
                const int bj = j < 2 ? 0 : (j < N - 2 ? 1 : 2);
                const bool ok = (allow_12 && bi == 0 && bj == 1) ||
                                (allow_23 && bi == 1 && bj == 2) ||
                                (allow_13 && bi == 0 && bj == 2);
                if (!ok) worst = std::max(worst, std::abs(M(i, j)));
            }
        }
        return worst;
    };
    if (off_pattern(W1, true, true, false) > tol)
        throw ShapeViolation("nilpotent_inverse: W1 is not strictly block upper triangular");
    if (off_pattern(W2, false, false, true) > tol)
        throw ShapeViolation("nilpotent_inverse: W2 is not confined to the corner block");

    LaurentLoop inv(N);
    inv.set_coeff(0, I);
    inv.set_coeff(-1, -W1);
    inv.set_coeff(-2, W1 * W1 - W2);
    return inv;
}

} // namespace loopforge
