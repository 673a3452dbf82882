#include <doctest.h>

#include "loopforge/matpoly.hpp"
#include "test_support.hpp"

using namespace loopforge;
using loopforge::testing::Rng;

TEST_CASE("antiderivative: zero, one, power rule") {
    CHECK(antiderivative(PolyZ{}).is_zero());
    CHECK(antiderivative(PolyZ{Complex(1.0)}) == PolyZ::variable());

    PolyZ p{Complex(0.0, 2.0), Complex(0.0), Complex(3.0)}; // 3z^2 + 2i
    PolyZ a = antiderivative(p);
    CHECK(a == PolyZ{Complex(0.0), Complex(0.0, 2.0), Complex(0.0), Complex(1.0)});
    CHECK(a.eval(Complex(0.0)) == Complex(0.0));
    CHECK(a.derivative() == p);
}

TEST_CASE("polynomials: trimming and degrees") {
    PolyZ p(std::vector<Complex>{Complex(1.0), Complex(0.0), Complex(0.0)});
    CHECK(p.degree() == 0);
    CHECK(PolyZ{}.degree() == -1);
    CHECK((PolyZ{Complex(1.0)} - PolyZ{Complex(1.0)}).is_zero());
}

TEST_CASE("polynomials: arithmetic consistency with evaluation") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        PolyZ p = rng.poly(4), q = rng.poly(3);
        Complex z = rng.cplx();
        CHECK(std::abs((p * q).eval(z) - p.eval(z) * q.eval(z)) < 1e-12);
        CHECK(std::abs((p + q).eval(z) - (p.eval(z) + q.eval(z))) < 1e-13);
        CHECK((antiderivative(p).derivative() - p).coeff_norm() < 1e-15 * (1.0 + p.coeff_norm()));
        CHECK(antiderivative(p).eval(Complex(0.0)) == Complex(0.0));
    }
}

TEST_CASE("matpoly: shape checks and evaluation") {
    Rng rng(22);
    MatPolyZ A = rng.matpoly(2, 3, 2), B = rng.matpoly(3, 2, 2);
    Complex z = rng.cplx();
    CHECK(((A * B).eval(z) - A.eval(z) * B.eval(z)).norm() < 1e-12);
    CHECK_THROWS_AS(A + B, DimensionMismatch);
    CHECK(((A.transpose()).eval(z) - A.eval(z).transpose()).norm() == 0.0);
}

TEST_CASE("matpoly: coefficient matrices round trip") {
    Rng rng(23);
    MatPolyZ A = rng.matpoly(3, 3, 3);
    std::vector<CMatrix> cs;
    for (int k = 0; k <= A.max_degree(); ++k) cs.push_back(A.coeff_matrix(k));
    MatPolyZ back = MatPolyZ::from_coeff_matrices(cs);
    CHECK((back - A).is_zero());
}
