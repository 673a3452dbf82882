#include "loopforge/iwasawa.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace loopforge {

namespace {

double cond2x2(const CMatrix& M) {
    std::vector<double> sv = M.singular_values();
    if (sv.empty() || sv.back() == 0.0) return std::numeric_limits<double>::infinity();
    return sv.front() / sv.back();
}

/// Cholesky factor R (upper triangular, positive real diagonal) with
/// q = adjoint(R) * R. Throws on non-Hermitian or non positive definite q.
CMatrix cholesky_upper(const CMatrix& q, double herm_tol) {
    const int n = q.rows();
    double scale = 1.0 + q.norm();
    if ((q - q.adjoint()).norm() > herm_tol * scale)
        throw HermitianityViolation("factor_L0: q is not Hermitian, defect " +
                                    std::to_string((q - q.adjoint()).norm()));
    CMatrix R = CMatrix::zero(n, n);
    for (int i = 0; i < n; ++i) {
        Complex s = q(i, i);
        for (int k = 0; k < i; ++k) s -= std::conj(R(k, i)) * R(k, i);
        double piv = s.real();
        if (piv <= 1e-14 * scale)
            throw NotPositiveDefinite("factor_L0: q pivot " + std::to_string(piv) +
                                      " at index " + std::to_string(i));
        R(i, i) = std::sqrt(piv);
        for (int j = i + 1; j < n; ++j) {
            Complex t = q(i, j);
            for (int k = 0; k < i; ++k) t -= std::conj(R(k, i)) * R(k, j);
            R(i, j) = t / R(i, i);
        }
    }
    return R;
}

} // namespace

IwasawaPointFactors solve_point(const CMatrix& fval, const CMatrix& gval,
                                const ConstantSet& C, double tol) {
    const int n = C.n();
    const int N = C.dim();
    if (fval.rows() != 2 || fval.cols() != n)
        throw DimensionMismatch("solve_point: f must be 2 x (2m-4)");
    if (gval.rows() != 2 || gval.cols() != 2)
        throw DimensionMismatch("solve_point: g must be 2 x 2");

    const CMatrix I2 = CMatrix::identity(2);
    const CMatrix In = CMatrix::identity(n);
    const CMatrix fsh = sharp(fval, C);               // n x 2
    const CMatrix fsh_bar_t = fsh.conjugate().transpose(); // 2 x n
    const CMatrix g_bar_t = gval.conjugate().transpose();

    IwasawaPointFactors out;
    out.d = I2 + C.E4 * fsh_bar_t * fsh + C.E4 * g_bar_t * C.E1 * gval;

    const Complex det_d = out.d.determinant();
    out.cond_d = cond2x2(out.d);
    if (std::abs(det_d) < tol || out.cond_d > 1.0 / tol)
        throw SingularD("solve_point: d is singular or ill-conditioned (|det| = " +
                        std::to_string(std::abs(det_d)) + ", cond = " +
                        std::to_string(out.cond_d) + ")");
    const CMatrix dinv = out.d.inverse();

    out.u_sharp = (fsh - fval.conjugate().transpose() * C.E1 * gval) * dinv;
    out.u = sharp_inv(out.u_sharp, C);

    const CMatrix ush_bar_t = out.u_sharp.conjugate().transpose(); // 2 x n
    out.q = In + fval.conjugate().transpose() * C.E1 * fval -
            out.u_sharp * out.d * C.E4 * ush_bar_t;

    const CMatrix u_bar_t = out.u.conjugate().transpose(); // n x 2
    const CMatrix dinv_bar_t = dinv.conjugate().transpose();
    const CMatrix uq = out.u * out.q;
    const CMatrix g_term = gval * C.E4 * dinv_bar_t * g_bar_t;
    out.a = I2 - uq * u_bar_t * C.E1 - g_term * C.E1;
    out.b = C.E2 * fsh_bar_t * fsh + C.E2 * g_bar_t * C.E1 * gval -
            uq * u_bar_t * C.E2 - g_term * C.E2;

    out.ghat = gval * dinv;
    out.residual_F = (uq - gval * C.E4 * ush_bar_t - fval).norm();

    out.W0 = CMatrix::zero(N, N);
    out.W0.set_block(0, 0, out.a);
    out.W0.set_block(0, N - 2, out.b);
    out.W0.set_block(2, 2, out.q);
    out.W0.set_block(N - 2, N - 2, out.d);
    return out;
}

CMatrix factor_L0(const IwasawaPointFactors& factors, const ConstantSet& C,
                  const BranchConfig& branch) {
    const int N = C.dim();
    const CMatrix& a = factors.a;
    const CMatrix& b = factors.b;
    const CMatrix& d = factors.d;

    const Complex a11 = a(0, 0), a12 = a(0, 1), a22 = a(1, 1);
    const Complex a33 = d(0, 0);

    // Triangular structure of the corner data.
    const double corner_tol = 1e-8;
    double structure = std::max({std::abs(a(1, 0)), std::abs(d(1, 0)), std::abs(b(1, 0))});
    structure = std::max(structure, std::abs(std::abs(a11) - 1.0));
    structure = std::max(structure, std::abs(a22 * a33 - 1.0));
    structure = std::max(structure, std::abs(d(1, 1) - std::conj(a11)));
    structure = std::max(structure, std::abs(b(1, 1) - std::conj(a12)));
    if (a22.real() <= 0.0)
        throw NotPositiveDefinite("factor_L0: a22 is not positive");
    structure = std::max(structure, std::abs(a22.imag()));
    // dependent corner entries of W0: conj(a13) = -a12 conj(a11) / a22 and
    // a14 = |a12|^2 / a22
    structure = std::max(structure, std::abs(d(0, 1) + a12 * std::conj(a11) / a22));
    structure = std::max(structure, std::abs(b(0, 1) - std::norm(a12) / a22));
    if (structure > corner_tol)
        throw StructureViolation("factor_L0: W0 corner relations fail, defect " +
                                 std::to_string(structure));

    Complex l11 = std::sqrt(a11);
    if (branch.mode == BranchConfig::Mode::Continued &&
        std::abs(l11 - branch.previous_l11) > std::abs(-l11 - branch.previous_l11))
        l11 = -l11;
    const Complex l22 = std::sqrt(a22.real());
    // The corner system determines l12 only jointly with l13; the l13 = 0
    // gauge makes l14 = l24 = 0 and l12 = a12 / l11.
    const Complex l12 = a12 / l11;
    const Complex l33 = 1.0 / l22;
    const Complex l44 = 1.0 / l11;
    const Complex l34 = -l12 / (l11 * l22);

    const CMatrix R = cholesky_upper(factors.q, 1e-10);

    CMatrix L0 = CMatrix::zero(N, N);
    L0(0, 0) = l11;
    L0(0, 1) = l12;
    L0(1, 1) = l22;
    L0(N - 2, N - 2) = l33;
    L0(N - 2, N - 1) = l34;
    L0(N - 1, N - 1) = l44;
    L0.set_block(2, 2, R);

    const CMatrix rebuilt = C.Jhat * L0.conjugate().transpose() * C.Jhat * L0;
    const double verify = (rebuilt - factors.W0).norm();
    if (verify > 1e-9 * (1.0 + factors.W0.norm()))
        throw StructureViolation("factor_L0: tau_hat(L0)^{-1} L0 differs from W0 by " +
                                 std::to_string(verify));
    return L0;
}

FramePair assemble_frame(const LaurentLoop& H_at_z, const IwasawaPointFactors& factors,
                         const CMatrix& L0, const ConstantSet& C) {
    const int N = C.dim();
    if (H_at_z.size() != N) throw DimensionMismatch("assemble_frame: H size mismatch");

    CMatrix W1 = CMatrix::zero(N, N);
    W1.set_block(0, 2, factors.u);
    W1.set_block(2, N - 2, -factors.u_sharp);
    CMatrix W2 = CMatrix::zero(N, N);
    W2.set_block(0, N - 2, factors.ghat);

    LaurentLoop W = LaurentLoop::identity(N);
    W.set_coeff(-1, W1);
    W.set_coeff(-2, W2);

    LaurentLoop tauW = tau_hat(W, C);
    LaurentLoop tauW_inv = tau_hat(nilpotent_inverse(W, C), C);

    FramePair out{LaurentLoop(N), LaurentLoop(N)};
    out.F = H_at_z * tauW * L0.inverse();
    out.Fplus = L0 * tauW_inv;
    return out;
}

Oracle2m6 oracle_2m6(Complex f1, Complex f2, Complex f3, Complex f4,
                     Complex /*g1*/, Complex /*g2*/, Complex g3, Complex g4) {
    Oracle2m6 out;
    const Complex d1 = 1.0 + std::norm(f3) + std::norm(f4) + std::norm(g3);
    const Complex d2 = std::conj(f3) * f1 + std::conj(f4) * f2 + std::conj(g3) * g4;
    out.d = CMatrix(2, 2, {d1, d2, 0.0, 1.0});

    // u^sharp = [[u4, u2], [u3, u1]] in the reduced closed forms.
    const Complex u1 = (f1 - f2 * f3 * std::conj(f4) - std::conj(f4) * g4) / (1.0 + std::norm(f3));
    const Complex u2 = (f2 - f1 * std::conj(f3) * f4 - std::conj(f3) * g4) / (1.0 + std::norm(f4));
    const Complex u3 = f3 / (1.0 + std::norm(f3));
    const Complex u4 = f4 / (1.0 + std::norm(f4));
    out.u_sharp = CMatrix(2, 2, {u4, u2, u3, u1});
    // sharp_inv for 2 x 2: J2 M^t J2 (swap the anti-diagonal fixed points)
    out.u = CMatrix(2, 2, {u1, u2, u3, u4});

    const double r34 = (1.0 + std::norm(f3)) / (1.0 + std::norm(f4));
    out.q = CMatrix(2, 2, {Complex(r34), 0.0, 0.0, Complex(1.0 / r34)});
    return out;
}

FrameResiduals frame_residuals(const LaurentLoop& F, const LaurentLoop& Fplus,
                               const LaurentLoop& H, const ConstantSet& C,
                               std::span<const Complex> lambda_samples) {
    FrameResiduals out;
    for (Complex lam : lambda_samples) {
        CMatrix Fv = F.eval(lam);
        out.iwasawa = std::max(out.iwasawa, (Fv * Fplus.eval(lam) - H.eval(lam)).norm());
        out.membership = std::max(out.membership, membership_residual(Fv, MembershipLaw::G2m));
    }
    LaurentLoop diff = tau_hat(F, C) - F;
    out.reality = diff.coeff_norm();
    out.plus_positivity = Fplus.norm_outside(0, std::numeric_limits<int>::max());
    out.degree_bound = F.norm_outside(-2, 2);
    return out;
}

} // namespace loopforge
