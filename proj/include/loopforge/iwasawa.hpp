#ifndef LOOPFORGE_IWASAWA_HPP
#define LOOPFORGE_IWASAWA_HPP

#include <span>

#include "loopforge/algebra.hpp"
#include "loopforge/frame.hpp"

namespace loopforge {

/// Per-point solution of the block equation system: the unipotent data
/// (u, ghat), the triangular data (a, b, d, q) assembled into W0, and the
/// defining residuals.
struct IwasawaPointFactors {
    CMatrix u;       // 2 x (2m-4)
    CMatrix u_sharp; // (2m-4) x 2
    CMatrix d;       // 2 x 2
    CMatrix a;       // 2 x 2
    CMatrix b;       // 2 x 2
    CMatrix ghat;    // 2 x 2, = g d^{-1}
    CMatrix q;       // (2m-4) x (2m-4)
    CMatrix W0;      // 2m x 2m, [[a,0,b],[0,q,0],[0,0,d]]
    CMatrix L0;      // 2m x 2m, filled once factor_L0 has run on this record
    double residual_F = 0.0; // consequence equation defect
    double cond_d = 0.0;
};

/// Solves the point system for given values f = f(z), g = g(z). Throws
/// SingularD when |det d| < tol or cond(d) > 1/tol (leaving the big cell).
IwasawaPointFactors solve_point(const CMatrix& fval, const CMatrix& gval,
                                const ConstantSet& C, double tol = 1e-8);

struct BranchConfig {
    enum class Mode { Principal, Continued };
    Mode mode = Mode::Principal;
    /// In Continued mode the sign of l11 is chosen to stay close to this.
    Complex previous_l11 = Complex(1.0, 0.0);
};

/// Builds the block upper triangular L0 with tau_hat(L0)^{-1} L0 = W0:
/// corner entries from the triangular relations, middle block from the
/// conjugate-transpose Cholesky factor of q. Throws HermitianityViolation /
/// NotPositiveDefinite on a bad q and StructureViolation if the corner
/// relations or the reconstruction identity fail.
CMatrix factor_L0(const IwasawaPointFactors& factors, const ConstantSet& C,
                  const BranchConfig& branch = {});

struct FramePair {
    LaurentLoop F;     // real-form factor, degrees within [-2, 2]
    LaurentLoop Fplus; // positive factor, degrees within [0, 2]
};

/// F = H tau_hat(W) L0^{-1} and Fplus = L0 tau_hat(W)^{-1}, so that
/// F * Fplus = H exactly.
FramePair assemble_frame(const LaurentLoop& H_at_z, const IwasawaPointFactors& factors,
                         const CMatrix& L0, const ConstantSet& C);

/// Closed forms of the 2m = 6 worked example (d per the defining equation
/// including the conjugate g-term; u entries and diagonal q in the reduced
/// forms valid when g3 = -f3 f4, g2 = -f1 f2).
struct Oracle2m6 {
    CMatrix d;       // 2 x 2
    CMatrix u_sharp; // 2 x 2
    CMatrix u;       // 2 x 2
    CMatrix q;       // 2 x 2
};

Oracle2m6 oracle_2m6(Complex f1, Complex f2, Complex f3, Complex f4,
                     Complex g1, Complex g2, Complex g3, Complex g4);

struct FrameResiduals {
    double iwasawa = 0.0;         // max_lambda || F Fplus - H ||_F
    double reality = 0.0;         // coefficient-wise || tau_hat(F) - F ||
    double membership = 0.0;      // max_lambda J-orthogonality residual of F
    double plus_positivity = 0.0; // norm of negative-degree coefficients of Fplus
    double degree_bound = 0.0;    // norm of F coefficients outside [-2, 2]
};

FrameResiduals frame_residuals(const LaurentLoop& F, const LaurentLoop& Fplus,
                               const LaurentLoop& H, const ConstantSet& C,
                               std::span<const Complex> lambda_samples);

} // namespace loopforge

#endif
