#include <doctest.h>

#include <cmath>

#include "loopforge/algebra.hpp"
#include "test_support.hpp"

using namespace loopforge;
using loopforge::testing::Rng;
using loopforge::testing::random_unipotent_loop;
using loopforge::testing::roots_of_unity;

TEST_CASE("constants: J6 is the antidiagonal of ones") {
    ConstantSet C = build_constants(3);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(C.J(i, j) == Complex(i + j == 5 ? 1.0 : 0.0));
}

TEST_CASE("constants: Jhat6 has E1/E2 corners and I2 center") {
    ConstantSet C = build_constants(3);
    CHECK((C.Jhat.block(0, 0, 2, 2) - C.E1).norm() == 0.0);
    CHECK((C.Jhat.block(0, 4, 2, 2) - C.E2).norm() == 0.0);
    CHECK((C.Jhat.block(4, 0, 2, 2) - C.E3).norm() == 0.0);
    CHECK((C.Jhat.block(4, 4, 2, 2) - C.E4).norm() == 0.0);
    CHECK((C.Jhat.block(2, 2, 2, 2) - CMatrix::identity(2)).norm() == 0.0);
    CHECK((C.Jhat * C.Jhat - CMatrix::identity(6)).norm() == 0.0);
}

TEST_CASE("constants: Ptilde certification and derived identities") {
    for (int m : {3, 4, 5, 7}) {
        ConstantSet C = build_constants(m);
        CHECK((C.Ptilde.transpose() * C.I1q * C.Ptilde - C.J).norm() < 1e-14);
        // D0 = Ptilde^{-1} D Ptilde
        CHECK((C.Ptilde_inv * C.D * C.Ptilde - C.D0).norm() < 1e-14);
        CHECK(C.D0(0, 0) == Complex(-1.0));
        CHECK(C.D0(2, 2) == Complex(1.0));
        CHECK(C.D0(C.dim() - 1, C.dim() - 1) == Complex(-1.0));
    }
}

TEST_CASE("constants: m < 3 rejected") {
    CHECK_THROWS_AS(build_constants(2), DimensionTooSmall);
    CHECK_THROWS_AS(build_constants(0), DimensionTooSmall);
}

TEST_CASE("tau_hat: identity loop is a fixed point") {
    ConstantSet C = build_constants(3);
    LaurentLoop I = LaurentLoop::identity(6);
    CHECK((tau_hat(I, C) - I).coeff_norm() == 0.0);
}

TEST_CASE("tau_hat: lambda^{-1} M maps to lambda S conj(M) S") {
    ConstantSet C = build_constants(3);
    Rng rng(11);
    CMatrix M = rng.matrix(6, 6);
    LaurentLoop L = LaurentLoop::monomial(-1, M);
    LaurentLoop T = tau_hat(L, C);
    CHECK(T.min_degree() == 1);
    CHECK(T.max_degree() == 1);
    CHECK((T.coeff(1) - C.S * M.conjugate() * C.S).norm() == 0.0);
}

TEST_CASE("tau_hat: involution on random loops") {
    Rng rng(12);
    for (int m : {3, 4}) {
        ConstantSet C = build_constants(m);
        LaurentLoop L(C.dim());
        for (int k = -2; k <= 0; ++k) L.set_coeff(k, rng.matrix(C.dim(), C.dim()));
        double res = (tau_hat(tau_hat(L, C), C) - L).coeff_norm();
        CHECK(res <= 1e-15 * (1.0 + L.coeff_norm()));
    }
}

TEST_CASE("tau_hat_inverse: identity and group constants") {
    ConstantSet C = build_constants(3);
    LaurentLoop I = LaurentLoop::identity(6);
    CHECK((tau_hat_inverse(I, C) - I).coeff_norm() == 0.0);

    // constant loop in the group: diagonal preserving the antidiagonal pairing
    CMatrix L0 = CMatrix::diagonal({2.0, 0.5, 1.0, 1.0, 2.0, 0.5});
    REQUIRE(membership_residual(L0, MembershipLaw::G2m) < 1e-13);
    LaurentLoop L = LaurentLoop::monomial(0, L0);
    CMatrix expect = C.Jhat * L0.conjugate().transpose() * C.Jhat;
    CHECK((tau_hat_inverse(L, C).coeff(0) - expect).norm() < 1e-14);
}

TEST_CASE("tau_hat_inverse: inverse of tau_hat on admissible loops") {
    Rng rng(13);
    for (int m : {3, 4}) {
        ConstantSet C = build_constants(m);
        LaurentLoop W = random_unipotent_loop(rng, C, /*in_group=*/true);
        REQUIRE(membership_residual(W.eval(Complex(0, 1)), MembershipLaw::G2m) < 1e-12);
        LaurentLoop prod = tau_hat_inverse(W, C, 1e-10) * tau_hat(W, C);
        CMatrix at_i = prod.eval(Complex(0, 1));
        CHECK((at_i - CMatrix::identity(C.dim())).norm() < 1e-12);
    }
}

TEST_CASE("tau_hat_inverse: membership precondition enforced") {
    ConstantSet C = build_constants(3);
    Rng rng(14);
    LaurentLoop bad = random_unipotent_loop(rng, C, /*in_group=*/false);
    CHECK_THROWS_AS(tau_hat_inverse(bad, C, 1e-10), MembershipViolation);
}

TEST_CASE("tau_hat_inverse property: product near identity within 10 eps") {
    Rng rng(15);
    ConstantSet C = build_constants(3);
    auto lams = roots_of_unity(8);
    for (int trial = 0; trial < 20; ++trial) {
        LaurentLoop W = random_unipotent_loop(rng, C, true);
        double eps = 0.0;
        for (Complex lam : lams)
            eps = std::max(eps, membership_residual(W.eval(lam), MembershipLaw::G2m));
        LaurentLoop prod = tau_hat_inverse(W, C, 1e-8) * tau_hat(W, C);
        for (Complex lam : lams) {
            double defect = (prod.eval(lam) - CMatrix::identity(6)).norm();
            CHECK(defect <= 10.0 * eps + 1e-12);
        }
    }
}

TEST_CASE("sigma twist: identity, frame loops, and an untwisted defect") {
    ConstantSet C = build_constants(3);
    Rng rng(16);
    auto lams = roots_of_unity(8);

    CHECK(sigma_twist_residual(LaurentLoop::identity(6), C, lams) == 0.0);

    // loops of the frame shape are twisted
    LaurentLoop W = random_unipotent_loop(rng, C, true);
    CHECK(sigma_twist_residual(W, C, lams) < 1e-12);

    // diagonal-block lambda^{-1} coefficient breaks twisting by 2||block||
    CMatrix M = CMatrix::zero(6, 6);
    M(0, 0) = 0.7;
    M(1, 1) = -0.2;
    LaurentLoop U = LaurentLoop::identity(6);
    U.set_coeff(-1, M);
    std::vector<Complex> one{Complex(1.0, 0.0)};
    CHECK(sigma_twist_residual(U, C, one) == doctest::Approx(2.0 * M.norm()).epsilon(1e-12));
}

TEST_CASE("conjugate_P: identity, law transport, round trip") {
    Rng rng(17);
    for (int m : {3, 4}) {
        ConstantSet C = build_constants(m);
        const int N = C.dim();

        CHECK((conjugate_P(CMatrix::identity(N), C, ConjugateDirection::Forward) -
               CMatrix::identity(N))
                  .norm() < 1e-15);

        // Lorentz-orthogonal A: boost in the (0,1) plane times rotation in (2,3)
        double t = 0.6, th = 0.8;
        CMatrix A = CMatrix::identity(N);
        A(0, 0) = std::cosh(t);
        A(0, 1) = std::sinh(t);
        A(1, 0) = std::sinh(t);
        A(1, 1) = std::cosh(t);
        A(2, 2) = std::cos(th);
        A(2, 3) = std::sin(th);
        A(3, 2) = -std::sin(th);
        A(3, 3) = std::cos(th);
        REQUIRE(membership_residual(A, MembershipLaw::SO1q) < 1e-13);
        CHECK(membership_residual(conjugate_P(A, C, ConjugateDirection::Forward),
                                  MembershipLaw::G2m) < 1e-12);

        // residual transport within the (unit) conditioning of Ptilde
        CMatrix Apert = A;
        Apert(0, 2) += 1e-3;
        double r_so = membership_residual(Apert, MembershipLaw::SO1q);
        double r_g = membership_residual(conjugate_P(Apert, C, ConjugateDirection::Forward),
                                         MembershipLaw::G2m);
        CHECK(r_g <= r_so * (1.0 + 1e-12) + 1e-12);

        LaurentLoop L(N);
        for (int k = -2; k <= 1; ++k) L.set_coeff(k, rng.matrix(N, N));
        LaurentLoop rt = conjugate_P(conjugate_P(L, C, ConjugateDirection::Forward), C,
                                     ConjugateDirection::Backward);
        CHECK((rt - L).coeff_norm() <= 1e-14 * (1.0 + L.coeff_norm()));
    }
}

TEST_CASE("nilpotent_inverse: identity and the single-cell example") {
    ConstantSet C = build_constants(3);
    LaurentLoop I = LaurentLoop::identity(6);
    CHECK((nilpotent_inverse(I, C) - I).coeff_norm() == 0.0);

    CMatrix u(2, 2, {1.0, 0.0, 0.0, 0.0});
    CMatrix W1 = CMatrix::zero(6, 6);
    W1.set_block(0, 2, u);
    W1.set_block(2, 4, -sharp(u, C));
    LaurentLoop W = LaurentLoop::identity(6);
    W.set_coeff(-1, W1);
    LaurentLoop inv = nilpotent_inverse(W, C);
    CHECK((inv.coeff(-2) - W1 * W1).norm() == 0.0);
    CHECK((W * inv - I).coeff_norm() < 1e-15);
}

TEST_CASE("nilpotent_inverse: random admissible loops invert to 1e-13") {
    Rng rng(18);
    for (int m : {3, 4, 5}) {
        ConstantSet C = build_constants(m);
        for (int trial = 0; trial < 10; ++trial) {
            LaurentLoop W = random_unipotent_loop(rng, C, false);
            LaurentLoop prod = W * nilpotent_inverse(W, C);
            CHECK((prod - LaurentLoop::identity(C.dim())).coeff_norm() <
                  1e-13 * (1.0 + W.coeff_norm() * W.coeff_norm()));
        }
    }
}

TEST_CASE("nilpotent_inverse: shape violations rejected") {
    ConstantSet C = build_constants(3);
    LaurentLoop W = LaurentLoop::identity(6);
    CMatrix bad = CMatrix::zero(6, 6);
    bad(3, 0) = 1.0; // block (2,1): prohibited
    W.set_coeff(-1, bad);
    CHECK_THROWS_AS(nilpotent_inverse(W, C), ShapeViolation);

    LaurentLoop W2 = LaurentLoop::identity(6);
    CMatrix g = CMatrix::zero(6, 6);
    g(0, 0) = 1.0; // W2 must live in the corner block
    W2.set_coeff(-2, g);
    CHECK_THROWS_AS(nilpotent_inverse(W2, C), ShapeViolation);

    LaurentLoop W3(6);
    W3.set_coeff(0, CMatrix::identity(6) * Complex(2.0));
    CHECK_THROWS_AS(nilpotent_inverse(W3, C), ShapeViolation);
}

namespace {

// Independent route: triangular solve of the coefficient equations of
// (I + A_{-1} lambda^{-1} + A_{-2} lambda^{-2}) B = I, degree by degree.
LaurentLoop generic_loop_inverse(const LaurentLoop& A, int depth) {
    const int N = A.size();
    LaurentLoop B(N);
    B.set_coeff(0, CMatrix::identity(N));
    for (int k = -1; k >= -depth; --k) {
        CMatrix acc = CMatrix::zero(N, N);
        for (int j : {-1, -2}) {
            int idx = k - j;
            if (idx > 0) continue;
            CMatrix Bc = idx == 0 ? CMatrix::identity(N) : B.coeff(idx);
            acc += A.coeff(j) * Bc;
        }
        B.set_coeff(k, -acc);
    }
    return B;
}

} // namespace

TEST_CASE("nilpotent_inverse agrees with generic triangular inversion") {
    Rng rng(19);
    ConstantSet C = build_constants(4);
    for (int trial = 0; trial < 100; ++trial) {
        LaurentLoop W = random_unipotent_loop(rng, C, false);
        LaurentLoop closed = nilpotent_inverse(W, C);
        LaurentLoop generic = generic_loop_inverse(W, 6);
        // the generic route must terminate: everything below degree -2 vanishes
        CHECK(generic.norm_outside(-2, 0) < 1e-12 * (1.0 + W.coeff_norm()));
        generic.prune(1e-300);
        double diff = 0.0;
        for (int k = -2; k <= 0; ++k) diff = std::max(diff, (closed.coeff(k) - generic.coeff(k)).norm());
        CHECK(diff < 1e-12 * (1.0 + W.coeff_norm() * W.coeff_norm()));
    }
}

TEST_CASE("membership_residual: identities and scalings") {
    CHECK(membership_residual(CMatrix::identity(6), MembershipLaw::G2m) == 0.0);
    CHECK(membership_residual(CMatrix::identity(6), MembershipLaw::SO1q) == 0.0);
    CHECK(membership_residual(CMatrix::identity(4), MembershipLaw::SOn) == 0.0);

    CMatrix X = CMatrix::diagonal({2.0, 0.5, 1.0, 1.0, 2.0, 0.5});
    CHECK(membership_residual(X, MembershipLaw::G2m) < 1e-15);

    CMatrix Y = CMatrix::identity(6) * Complex(2.0);
    CHECK(membership_residual(Y, MembershipLaw::G2m) ==
          doctest::Approx(3.0 * std::sqrt(6.0)).epsilon(1e-13));
}

TEST_CASE("laurent loop: pruning keeps stored structure explicit") {
    LaurentLoop L(4);
    CMatrix small(4, 4);
    small(0, 0) = 1e-200;
    L.set_coeff(-3, small);
    CHECK(L.has_coeff(-3)); // tiny but nonzero coefficients stay
    L.prune(1e-100);
    CHECK_FALSE(L.has_coeff(-3));
    L.set_coeff(2, CMatrix::zero(4, 4));
    CHECK_FALSE(L.has_coeff(2)); // exact zeros are never stored
}
