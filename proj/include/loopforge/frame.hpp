#ifndef LOOPFORGE_FRAME_HPP
#define LOOPFORGE_FRAME_HPP

#include <functional>
#include <span>

#include "loopforge/algebra.hpp"
#include "loopforge/potential.hpp"

namespace loopforge {

/// Closed-form integral of the nilpotent potential: H = I + lambda^{-1} H1(z)
/// + lambda^{-2} H2(z) with H1 built from f = int ftilde and H2 from
/// g = -int (f ftilde^sharp). Both f and g vanish at z = 0.
struct MeromorphicFrame {
    int m = 0;
    MatPolyZ ftilde; // 2 x (2m-4)
    MatPolyZ f;      // entrywise antiderivative of ftilde
    MatPolyZ g;      // 2 x 2

    CMatrix H1_at(Complex z, const ConstantSet& C) const;
    CMatrix H2_at(Complex z, const ConstantSet& C) const;
    LaurentLoop H_at(Complex z, const ConstantSet& C) const;
};

MeromorphicFrame integrate_meromorphic_frame(const MatPolyZ& ftilde, const ConstantSet& C);

/// max over (z, lambda) samples of || H^{-1} dH/dz - lambda^{-1} P(eta_{-1})(z) ||_F,
/// with the derivative taken exactly on the polynomial coefficients and H^{-1}
/// from the closed-form nilpotent inverse.
double ode_residual_H(const MeromorphicFrame& frame, const MatPolyZ& eta_minus1,
                      const ConstantSet& C, std::span<const Complex> z_samples,
                      std::span<const Complex> lambda_samples);

struct QuadratureConfig {
    double target_error = 1e-10;
    int max_depth = 30;
};

/// Closed form for the 4x4 ODE frame driven by (a13, a14, a34): exact
/// antiderivatives when a34 = 0, adaptive quadrature along the straight
/// segment [0, z] otherwise. Throws QuadratureFailure if the error estimate
/// exceeds the configured target.
CMatrix F01_closed_form(const PolyZ& a13, const PolyZ& a14, const PolyZ& a34,
                        Complex z, const QuadratureConfig& cfg = {});

using MatrixFn = std::function<CMatrix(Complex)>;

struct WuResult {
    std::vector<CMatrix> Bhat_samples; // one per requested z
    double pattern_residual = 0.0;     // worst violation of the (r1,-r1,r3,ir3) rows
};

struct WuOptions {
    double rk4_step = 1e-3;
    bool minus_i_branch = false; // accept row4 = -i * row3 instead
    QuadratureConfig quadrature;
};

/// Frame-dressed potential Bhat(z) = F01(z) * B1(z) * F02(z)^{-1} with F02
/// integrated by RK4 from the skew-symmetric delta2 (pass nullptr for
/// delta2 = 0, i.e. F02 = I). Throws ShapeViolation when the dressed matrix
/// loses the duplicated-row column pattern.
WuResult wu_potential(const PolyZ& a13, const PolyZ& a14, const PolyZ& a34,
                      const MatrixFn& delta2, const MatPolyZ& B1_hol,
                      std::span<const Complex> z_samples, const WuOptions& opt = {});

} // namespace loopforge

#endif
