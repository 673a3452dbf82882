#include "loopforge/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace loopforge {

namespace {

const Complex kI(0.0, 1.0);

struct BlockCuts {
    int c0, c1, c2, c3;
};

double block_norm(const CMatrix& M, const BlockCuts& c, int bi, int bj) {
    const int r0 = bi == 0 ? c.c0 : (bi == 1 ? c.c1 : c.c2);
    const int r1 = bi == 0 ? c.c1 : (bi == 1 ? c.c2 : c.c3);
    const int s0 = bj == 0 ? c.c0 : (bj == 1 ? c.c1 : c.c2);
    const int s1 = bj == 0 ? c.c1 : (bj == 1 ? c.c2 : c.c3);
    return M.block(r0, s0, r1 - r0, s1 - s0).norm();
}

/// d/dz by the central half-difference of x- and y-steps at the given stride.
CMatrix dz_central(const FrameField& f, int ix, int iy, int stride) {
    const double hh = f.h * stride;
    CMatrix dx = (f.frame_at(ix + stride, iy) - f.frame_at(ix - stride, iy)) * Complex(1.0 / (2 * hh));
    CMatrix dy = (f.frame_at(ix, iy + stride) - f.frame_at(ix, iy - stride)) * Complex(1.0 / (2 * hh));
    return (dx - dy * kI) * Complex(0.5);
}

} // namespace

double FrameField::reality_residual() const {
    double worst = 0.0;
    for (const CMatrix& F : frames) worst = std::max(worst, F.imag_norm());
    return worst;
}

double FrameField::membership_residual_so1q() const {
    double worst = 0.0;
    for (const CMatrix& F : frames)
        worst = std::max(worst, membership_residual(F, MembershipLaw::SO1q));
    return worst;
}

McReport maurer_cartan(std::span<const FrameField> fields, const ConstantSet& C,
                       double pattern_tol) {
    if (fields.size() < 8)
        throw Error("maurer_cartan: need at least 8 lambda samples for degree separation");
    const int L = static_cast<int>(fields.size());
    const int N = C.dim();
    const FrameField& f0 = fields[0];
    if (f0.nx < 5 || f0.ny < 5)
        throw GridTooCoarse("maurer_cartan: grid must be at least 5x5 for nested stencils");
    for (const FrameField& f : fields)
        if (f.nx != f0.nx || f.ny != f0.ny || f.h != f0.h)
            throw DimensionMismatch("maurer_cartan: fields must share one grid");
    // lambda samples must be equispaced on the circle for the coefficient DFT
    for (int j = 0; j < L; ++j) {
        Complex expect = fields[0].lambda *
                         std::exp(kI * (2.0 * std::numbers::pi * j / L));
        if (std::abs(fields[j].lambda - expect) > 1e-12)
            throw Error("maurer_cartan: lambda samples are not equispaced");
    }

    const BlockCuts cuts{0, 2, N - 2, N};
    McReport rep;

    const int icx = f0.nx / 2, icy = f0.ny / 2;
    std::vector<CMatrix> alpha_h, alpha_2h, alphaF_h;
    alpha_h.reserve(L);
    for (int j = 0; j < L; ++j) {
        const FrameField& f = fields[j];
        // back to the triangular side: Ftilde = P^{-1} F P
        auto tilde = [&](int ix, int iy) {
            return conjugate_P(f.frame_at(ix, iy), C, ConjugateDirection::Forward);
        };
        CMatrix Ft0 = tilde(icx, icy);
        auto dz_tilde = [&](int stride) {
            const double hh = f.h * stride;
            CMatrix dx = (tilde(icx + stride, icy) - tilde(icx - stride, icy)) *
                         Complex(1.0 / (2 * hh));
            CMatrix dy = (tilde(icx, icy + stride) - tilde(icx, icy - stride)) *
                         Complex(1.0 / (2 * hh));
            return (dx - dy * kI) * Complex(0.5);
        };
        alpha_h.push_back(Ft0.solve(dz_tilde(1)));
        alpha_2h.push_back(Ft0.solve(dz_tilde(2)));
        alphaF_h.push_back(f.frame_at(icx, icy).solve(dz_central(f, icx, icy, 1)));
    }

    for (int j = 0; j < L; ++j)
        rep.fd_error_estimate =
            std::max(rep.fd_error_estimate, (alpha_h[j] - alpha_2h[j]).norm() / 3.0);
    if (rep.fd_error_estimate > pattern_tol)
        throw GridTooCoarse("maurer_cartan: finite-difference error estimate " +
                            std::to_string(rep.fd_error_estimate) +
                            " exceeds the pattern tolerance");

    // coefficient extraction over the lambda circle
    auto dft = [&](const std::vector<CMatrix>& vals, int k) {
        CMatrix acc = CMatrix::zero(N, N);
        for (int j = 0; j < L; ++j) {
            Complex w = std::pow(fields[j].lambda, -k);
            acc += vals[j] * (w / Complex(static_cast<double>(L)));
        }
        return acc;
    };

    CMatrix a0 = dft(alpha_h, 0);
    CMatrix am1 = dft(alpha_h, -1);
    for (int bi = 0; bi < 3; ++bi)
        for (int bj = 0; bj < 3; ++bj) {
            const bool diag_or_corner = (bi == bj) || (bi == 0 && bj == 2);
            if (!diag_or_corner)
                rep.lambda0_prohibited =
                    std::max(rep.lambda0_prohibited, block_norm(a0, cuts, bi, bj));
            const bool superdiag = (bi == 0 && bj == 1) || (bi == 1 && bj == 2);
            if (!superdiag)
                rep.lambda_minus1_prohibited =
                    std::max(rep.lambda_minus1_prohibited, block_norm(am1, cuts, bi, bj));
        }
    for (int k = -L / 2 + 1; k <= L / 2; ++k)
        if (std::abs(k) > 1)
            rep.degree_excess = std::max(rep.degree_excess, dft(alpha_h, k).norm());

    // Pulled-back side: A1 shape, duplicated B1 rows, a12 proportionality.
    CMatrix aF0 = dft(alphaF_h, 0);
    CMatrix aFm1 = dft(alphaF_h, -1);
    const Complex a12 = aF0(0, 1), a13 = aF0(0, 2), a14 = aF0(0, 3), a34 = aF0(2, 3);
    rep.a12 = a12;
    CMatrix A1_expected(4, 4,
                        {0.0, a12, a13, a14,
                         a12, 0.0, a13, a14,
                         a13, -a13, 0.0, a34,
                         a14, -a14, -a34, 0.0});
    rep.a1_structure = (aF0.block(0, 0, 4, 4) - A1_expected).norm();
    CMatrix B1 = aFm1.block(0, 4, 4, N - 4);
    for (int j = 0; j < N - 4; ++j) {
        rep.duplicated_rows = std::max(rep.duplicated_rows, std::abs(B1(1, j) - B1(0, j)));
        rep.duplicated_rows =
            std::max(rep.duplicated_rows, std::abs(B1(3, j) - kI * B1(2, j)));
    }

    for (int j = 0; j < L; ++j) {
        const FrameField& f = fields[j];
        const CMatrix& F = f.frame_at(icx, icy);
        CMatrix dF = dz_central(f, icx, icy, 1);
        const int rows = N;
        CMatrix s(rows, 1), ds(rows, 1);
        for (int r = 0; r < rows; ++r) {
            s(r, 0) = F(r, 0) + F(r, 1);
            ds(r, 0) = dF(r, 0) + dF(r, 1);
        }
        Complex a12_lam = alphaF_h[j](0, 1);
        double res = (ds - s * a12_lam).norm() / (1.0 + s.norm());
        rep.a12_residual = std::max(rep.a12_residual, res);
    }
    return rep;
}

LightlikeResult constant_lightlike(const FrameField& field, const ConstantSet& C,
                                   VectorNormalization norm) {
    const int N = C.dim();
    if (field.frames.empty()) throw Error("constant_lightlike: empty field");

    std::vector<std::vector<Complex>> vs;
    vs.reserve(field.frames.size());
    for (const CMatrix& F : field.frames) {
        std::vector<Complex> s(N);
        double snorm = 0.0;
        for (int r = 0; r < N; ++r) {
            s[r] = F(r, 0) + F(r, 1);
            snorm += std::norm(s[r]);
        }
        snorm = std::sqrt(snorm);
        if (std::abs(s[0]) < 1e-10 * (1.0 + snorm))
            throw NormalizationFailure(
                "constant_lightlike: first coordinate of phi1+phi2 vanishes on the grid");
        const Complex scale = norm == VectorNormalization::FirstCoordinate
                                  ? s[0]
                                  : Complex(s[0].real() < 0.0 ? -snorm : snorm);
        for (int r = 0; r < N; ++r) s[r] /= scale;
        vs.push_back(std::move(s));
    }

    std::vector<Complex> mean(N, 0.0);
    for (const auto& v : vs)
        for (int r = 0; r < N; ++r) mean[r] += v[r];
    for (int r = 0; r < N; ++r) mean[r] /= static_cast<double>(vs.size());

    double mean_norm = 0.0;
    for (int r = 0; r < N; ++r) mean_norm += std::norm(mean[r]);
    mean_norm = std::sqrt(mean_norm);

    LightlikeResult out;
    for (const auto& v : vs) {
        double dev = 0.0;
        for (int r = 0; r < N; ++r) dev += std::norm(v[r] - mean[r]);
        out.const_residual = std::max(out.const_residual, std::sqrt(dev) / mean_norm);
    }
    out.v.resize(N);
    for (int r = 0; r < N; ++r) out.v[r] = mean[r].real();
    double qf = -out.v[0] * out.v[0];
    double vv = 0.0;
    for (int r = 0; r < N; ++r) vv += out.v[r] * out.v[r];
    for (int r = 1; r < N; ++r) qf += out.v[r] * out.v[r];
    out.isotropy_residual = std::abs(qf) / vv;
    return out;
}

ConstVectorReport constant_vector_check(const FrameField& field,
                                        std::span<const double> v, const ConstantSet& C,
                                        double class_tol) {
    const int N = C.dim();
    if (static_cast<int>(v.size()) != N)
        throw DimensionMismatch("constant_vector_check: vector length mismatch");
    double vnorm = 0.0;
    for (double x : v) vnorm += x * x;
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) throw Error("constant_vector_check: v must be nonzero");

    CMatrix vc(N, 1);
    for (int r = 0; r < N; ++r) vc(r, 0) = v[r];

    ConstVectorReport out;
    for (const CMatrix& F : field.frames) {
        // F^{-1} = I1q F^t I1q for Lorentz-orthogonal frames
        CMatrix w = C.I1q * F.transpose() * C.I1q * vc;
        double tail = w.block(4, 0, N - 4, 1).norm();
        out.span_residual = std::max(out.span_residual, tail / vnorm);
    }

    double qf = -v[0] * v[0];
    for (int r = 1; r < N; ++r) qf += v[r] * v[r];
    out.quadratic_form = qf / (vnorm * vnorm);
    if (std::abs(out.quadratic_form) < class_tol)
        out.causal = CausalClass::Lightlike;
    else if (out.quadratic_form < 0.0)
        out.causal = CausalClass::Timelike;
    else
        out.causal = CausalClass::Spacelike;
    return out;
}

} // namespace loopforge
