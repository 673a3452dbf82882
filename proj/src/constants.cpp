#include "loopforge/constants.hpp"

#include <cmath>
#include <string>

namespace loopforge {

ConstantSet build_constants(int m) {
    if (m < 3)
        throw DimensionTooSmall("build_constants: m must be >= 3, got " + std::to_string(m));

    const int N = 2 * m;
    ConstantSet C;
    C.m = m;

    C.J = CMatrix::zero(N, N);
    for (int k = 0; k < N; ++k) C.J(k, N - 1 - k) = 1.0;

    C.S = CMatrix::zero(N, N);
    C.S(0, 0) = 1.0;
    C.S(N - 1, N - 1) = 1.0;
    for (int k = 1; k < N - 1; ++k) C.S(k, N - 1 - k) = 1.0;

    C.Jhat = C.S * C.J;

    C.I1q = CMatrix::identity(N);
    C.I1q(0, 0) = -1.0;

    C.I13 = CMatrix::identity(4);
    C.I13(0, 0) = -1.0;

    C.D = CMatrix::identity(N);
    for (int k = 0; k < 4; ++k) C.D(k, k) = -1.0;

    C.D0 = CMatrix::identity(N);
    for (int k : {0, 1, N - 2, N - 1}) C.D0(k, k) = -1.0;

    // Column pattern: column 1 and column 2m span the lightcone pair in rows
    // 1,2; columns k and 2m+1-k (k = 2..m) pair rows 2k-1, 2k. (1-based)
    const double s = 1.0 / std::sqrt(2.0);
    C.Ptilde = CMatrix::zero(N, N);
    C.Ptilde(0, 0) = s;
    C.Ptilde(1, 0) = s;
    C.Ptilde(0, N - 1) = -s;
    C.Ptilde(1, N - 1) = s;
    for (int k = 2; k <= m; ++k) {
        const int c1 = k - 1, c2 = N - k;
        const int r1 = 2 * k - 2, r2 = 2 * k - 1;
        C.Ptilde(r1, c1) = Complex(0.0, -s);
        C.Ptilde(r2, c1) = s;
        C.Ptilde(r1, c2) = Complex(0.0, s);
        C.Ptilde(r2, c2) = s;
    }
    C.Ptilde_inv = C.Ptilde.adjoint(); // Ptilde is unitary

    C.E1 = CMatrix(2, 2, {0.0, 0.0, 0.0, 1.0});
    C.E2 = CMatrix(2, 2, {0.0, 1.0, 0.0, 0.0});
    C.E3 = C.E2.transpose();
    C.E4 = CMatrix(2, 2, {1.0, 0.0, 0.0, 0.0});

    const double cert = (C.Ptilde.transpose() * C.I1q * C.Ptilde - C.J).norm();
    if (cert >= 1e-14)
        throw StructureViolation("build_constants: Ptilde^t I Ptilde != J, residual " +
                                 std::to_string(cert));
    const double unit = (C.Ptilde_inv * C.Ptilde - CMatrix::identity(N)).norm();
    if (unit >= 1e-14)
        throw StructureViolation("build_constants: Ptilde is not unitary");

    return C;
}

} // namespace loopforge
