#include "loopforge/potential.hpp"

#include <cmath>
#include <string>

namespace loopforge {

namespace {

const Complex kI(0.0, 1.0);

CMatrix flip(int n) {
    CMatrix J = CMatrix::zero(n, n);
    for (int k = 0; k < n; ++k) J(k, n - 1 - k) = 1.0;
    return J;
}

void require_columns(size_t got, size_t want, const char* family) {
    if (got != want)
        throw SpecMismatch(std::string(family) + ": expected " + std::to_string(want) +
                           " column entries, got " + std::to_string(got));
}

} // namespace

MatPolyZ build_Bhat(const PotentialSpec& spec) {
    if (spec.m < 3) throw SpecMismatch("build_Bhat: m must be >= 3");
    const int n = spec.n();
    MatPolyZ B(4, n);

    switch (spec.kind()) {
        case PotentialSpec::Kind::Lightlike: {
            const auto& d = std::get<LightlikeData>(spec.data);
            require_columns(d.columns.size(), static_cast<size_t>(n), "lightlike");
            for (int j = 0; j < n; ++j) {
                const auto& c = d.columns[j];
                B.at(0, j) = c.f0 * c.f1;
                B.at(1, j) = -(c.f0 * c.f1);
                B.at(2, j) = c.f0 * c.f3;
                B.at(3, j) = c.f0 * c.f3 * kI;
            }
            break;
        }
        case PotentialSpec::Kind::Timelike: {
            const auto& d = std::get<TimelikeData>(spec.data);
            require_columns(d.g.size(), static_cast<size_t>(n), "timelike");
            const PolyZ one = PolyZ::constant(1.0);
            const PolyZ g0sq = d.g0 * d.g0;
            for (int j = 0; j < n; ++j) {
                B.at(0, j) = PolyZ{};
                B.at(1, j) = d.g[j] * d.g0 * Complex(2.0);
                B.at(2, j) = d.g[j] * (one - g0sq);
                B.at(3, j) = d.g[j] * (one + g0sq) * kI;
            }
            break;
        }
        case PotentialSpec::Kind::Spacelike: {
            const auto& d = std::get<SpacelikeData>(spec.data);
            require_columns(d.h.size(), static_cast<size_t>(n), "spacelike");
            const PolyZ one = PolyZ::constant(1.0);
            const PolyZ h0sq = d.h0 * d.h0;
            for (int j = 0; j < n; ++j) {
                B.at(0, j) = d.h[j] * d.h0 * (2.0 * kI);
                B.at(1, j) = PolyZ{};
                B.at(2, j) = d.h[j] * (one - h0sq);
                B.at(3, j) = d.h[j] * (one + h0sq) * kI;
            }
            break;
        }
        case PotentialSpec::Kind::MinimalNP: {
            const auto& d = std::get<MinimalNPData>(spec.data);
            require_columns(d.pairs.size(), static_cast<size_t>(spec.m - 2), "minimal_np");
            for (int p = 0; p < spec.m - 2; ++p) {
                const auto& cp = d.pairs[p];
                const int j1 = 2 * p, j2 = 2 * p + 1;
                B.at(0, j1) = cp.f1;
                B.at(1, j1) = cp.f1;
                B.at(2, j1) = cp.f3;
                B.at(3, j1) = cp.f3 * kI;
                B.at(0, j2) = cp.f2;
                B.at(1, j2) = cp.f2;
                B.at(2, j2) = cp.f4;
                B.at(3, j2) = cp.f4 * kI;
            }
            break;
        }
        case PotentialSpec::Kind::Raw: {
            const auto& d = std::get<RawData>(spec.data);
            if (d.B.rows() != 4 || d.B.cols() != n)
                throw SpecMismatch("raw potential: matrix must be 4 x (2m-4)");
            B = d.B;
            break;
        }
    }
    return B;
}

MatPolyZ gauge_to_native(const MatPolyZ& B) {
    if (B.rows() != 4) throw ShapeViolation("gauge_to_native: B must have 4 rows");
    MatPolyZ out = B;
    for (int j = 0; j < B.cols(); ++j) out.at(1, j) = -B.at(1, j);
    return out;
}

MatPolyZ gauge_to_lightlike(const MatPolyZ& B) { return gauge_to_native(B); }

double isotropy_residual(const MatPolyZ& B, std::span<const Complex> z_samples) {
    if (B.rows() != 4) throw ShapeViolation("isotropy_residual: B must be 4 x n");
    CMatrix I13 = CMatrix::identity(4);
    I13(0, 0) = -1.0;
    double worst = 0.0;
    for (Complex z : z_samples) {
        CMatrix Bz = B.eval(z);
        worst = std::max(worst, (Bz.transpose() * I13 * Bz).norm());
    }
    return worst;
}

MatPolyZ to_loop_potential(const MatPolyZ& B, const ConstantSet& C) {
    const int n = C.n();
    if (B.rows() != 4 || B.cols() != n)
        throw ShapeViolation("to_loop_potential: B must be 4 x (2m-4)");
    const int N = C.dim();
    MatPolyZ eta(N, N);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < n; ++j) eta.at(i, 4 + j) = B.at(i, j);
    // lower-left block: -B^t I_{1,3}
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 4; ++j) {
            PolyZ v = B.at(j, i);
            eta.at(4 + i, j) = (j == 0) ? v : -v;
        }
    return eta;
}

MatPolyZ extract_ftilde(const MatPolyZ& eta_minus1, const ConstantSet& C,
                        double pattern_tol) {
    const int N = C.dim();
    const int n = C.n();
    if (eta_minus1.rows() != N || eta_minus1.cols() != N)
        throw ShapeViolation("extract_ftilde: eta must be 2m x 2m");

    // Conjugate each z-degree coefficient by Ptilde to keep entries exact.
    const int dmax = eta_minus1.max_degree();
    std::vector<CMatrix> conj_coeffs;
    for (int k = 0; k <= std::max(dmax, 0); ++k)
        conj_coeffs.push_back(C.Ptilde_inv * eta_minus1.coeff_matrix(k) * C.Ptilde);
    MatPolyZ conj = MatPolyZ::from_coeff_matrices(conj_coeffs);

    MatPolyZ ft(2, n);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < n; ++j) ft.at(i, j) = conj.at(i, 2 + j);

    // Certify the three-block pattern at sampled z (block (2,3) must equal
    // -ft^sharp and everything else must vanish).
    MatPolyZ ft_sharp = sharp(ft, C);
    const double scale = 1.0 + conj.coeff_norm();
    static const Complex zs[] = {Complex(0.37, 0.22),  Complex(-0.51, 0.08),
                                 Complex(0.13, -0.44), Complex(-0.29, -0.31),
                                 Complex(0.61, 0.47)};
    double worst = 0.0;
    for (Complex z : zs) {
        CMatrix M = conj.eval(z);
        CMatrix expect = CMatrix::zero(N, N);
        expect.set_block(0, 2, ft.eval(z));
        expect.set_block(2, N - 2, -ft_sharp.eval(z));
        worst = std::max(worst, (M - expect).norm());
    }
    if (worst > pattern_tol * scale)
        throw PatternViolation(
            "extract_ftilde: conjugated potential is not in the nilpotent pattern, residual " +
            std::to_string(worst));
    return ft;
}

CMatrix sharp(const CMatrix& M, const ConstantSet& C) {
    if (M.rows() != 2 || M.cols() != C.n())
        throw ShapeViolation("sharp: M must be 2 x (2m-4)");
    return flip(C.n()) * M.transpose() * flip(2);
}

CMatrix sharp_inv(const CMatrix& M, const ConstantSet& C) {
    if (M.rows() != C.n() || M.cols() != 2)
        throw ShapeViolation("sharp_inv: M must be (2m-4) x 2");
    return flip(2) * M.transpose() * flip(C.n());
}

namespace {

MatPolyZ conj_by_flips(const MatPolyZ& M, int rout, int cout) {
    // out(i, j) = M(cout-1-j transposed ...): implemented entrywise to stay exact
    MatPolyZ out(rout, cout);
    for (int i = 0; i < rout; ++i)
        for (int j = 0; j < cout; ++j)
            out.at(i, j) = M.at(cout - 1 - j, rout - 1 - i);
    return out;
}

} // namespace

MatPolyZ sharp(const MatPolyZ& M, const ConstantSet& C) {
    if (M.rows() != 2 || M.cols() != C.n())
        throw ShapeViolation("sharp: M must be 2 x (2m-4)");
    // J_n M^t J_2 entrywise: (i, j) -> M(1-j, n-1-i)
    return conj_by_flips(M, C.n(), 2);
}

MatPolyZ sharp_inv(const MatPolyZ& M, const ConstantSet& C) {
    if (M.rows() != C.n() || M.cols() != 2)
        throw ShapeViolation("sharp_inv: M must be (2m-4) x 2");
    return conj_by_flips(M, 2, C.n());
}

RankProfile rank_profile(const MatPolyZ& B, std::span<const Complex> z_samples) {
    RankProfile out;
    for (Complex z : z_samples) {
        std::vector<double> sv = B.eval(z).singular_values();
        int rank = 0;
        if (!sv.empty() && sv[0] > 0.0) {
            const double thresh = 1e-10 * sv[0];
            for (double s : sv)
                if (s > thresh) ++rank;
        }
        out.point_ranks.push_back(rank);
        out.max_rank = std::max(out.max_rank, rank);
    }
    out.minimal_candidate = out.max_rank <= 1;
    out.willmore_excluded = out.max_rank >= 2;
    return out;
}

} // namespace loopforge
