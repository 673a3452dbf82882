#ifndef LOOPFORGE_TEST_SUPPORT_HPP
#define LOOPFORGE_TEST_SUPPORT_HPP

#include <random>

#include "loopforge/algebra.hpp"
#include "loopforge/geometry.hpp"
#include "loopforge/iwasawa.hpp"
#include "loopforge/matpoly.hpp"
#include "loopforge/potential.hpp"

namespace loopforge::testing {

struct Rng {
    std::mt19937_64 gen;
    std::uniform_real_distribution<double> unif{-1.0, 1.0};

    explicit Rng(uint64_t seed) : gen(seed) {}

    double real() { return unif(gen); }
    Complex cplx() { return {unif(gen), unif(gen)}; }

    PolyZ poly(int max_degree) {
        std::vector<Complex> c(max_degree + 1);
        for (auto& v : c) v = cplx();
        return PolyZ(std::move(c));
    }

    CMatrix matrix(int rows, int cols) {
        CMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = cplx();
        return m;
    }

    MatPolyZ matpoly(int rows, int cols, int max_degree) {
        MatPolyZ m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(i, j) = poly(max_degree);
        return m;
    }
};

/// Random loop I + lambda^{-1} W1(u) + lambda^{-2} W2(g) in the block shapes
/// of the factorization; when in_group, g is completed so the loop satisfies
/// the J-orthogonality law on the circle.
inline LaurentLoop random_unipotent_loop(Rng& rng, const ConstantSet& C, bool in_group) {
    const int N = C.dim();
    CMatrix u = rng.matrix(2, C.n());
    CMatrix g(2, 2);
    if (in_group) {
        CMatrix J2(2, 2, {0.0, 1.0, 1.0, 0.0});
        CMatrix Jn = CMatrix::zero(C.n(), C.n());
        for (int k = 0; k < C.n(); ++k) Jn(k, C.n() - 1 - k) = 1.0;
        CMatrix ush = sharp(u, C);
        CMatrix M = ush.transpose() * Jn * ush; // symmetric
        Complex a = rng.cplx();
        CMatrix A(2, 2, {0.0, a, -a, 0.0});
        g = J2 * (M * Complex(-0.5) + A);
    } else {
        g = rng.matrix(2, 2);
    }
    CMatrix W1 = CMatrix::zero(N, N), W2 = CMatrix::zero(N, N);
    W1.set_block(0, 2, u);
    W1.set_block(2, N - 2, -sharp(u, C));
    W2.set_block(0, N - 2, g);
    LaurentLoop W = LaurentLoop::identity(N);
    W.set_coeff(-1, W1);
    W.set_coeff(-2, W2);
    return W;
}

inline std::vector<Complex> roots_of_unity(int count) {
    std::vector<Complex> out(count);
    for (int k = 0; k < count; ++k) {
        double t = 2.0 * std::acos(-1.0) * k / count;
        out[k] = {std::cos(t), std::sin(t)};
    }
    return out;
}

/// Solves the factorization on a rectangular grid and returns the pulled-back
/// frame field for each lambda sample.
inline std::vector<FrameField> build_fields(const MeromorphicFrame& fr, const ConstantSet& C,
                                            Complex origin, double h, int nx, int ny,
                                            const std::vector<Complex>& lambdas) {
    std::vector<FrameField> fields(lambdas.size());
    for (size_t l = 0; l < lambdas.size(); ++l) {
        fields[l].nx = nx;
        fields[l].ny = ny;
        fields[l].origin = origin;
        fields[l].h = h;
        fields[l].lambda = lambdas[l];
        fields[l].frames.reserve(static_cast<size_t>(nx) * ny);
    }
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            Complex z = origin + Complex(ix * h, iy * h);
            IwasawaPointFactors fac = solve_point(fr.f.eval(z), fr.g.eval(z), C);
            CMatrix L0 = factor_L0(fac, C);
            FramePair fp = assemble_frame(fr.H_at(z, C), fac, L0, C);
            for (size_t l = 0; l < lambdas.size(); ++l)
                fields[l].frames.push_back(
                    conjugate_P(fp.F.eval(lambdas[l]), C, ConjugateDirection::Backward));
        }
    return fields;
}

} // namespace loopforge::testing

#endif
