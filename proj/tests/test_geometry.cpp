#include <doctest.h>

#include <cmath>

#include "loopforge/geometry.hpp"
#include "test_support.hpp"

using namespace loopforge;
using loopforge::testing::Rng;
using loopforge::testing::build_fields;
using loopforge::testing::roots_of_unity;

namespace {

std::vector<FrameField> identity_fields(const ConstantSet& C, int count) {
    auto lams = roots_of_unity(count);
    std::vector<FrameField> fields(lams.size());
    for (size_t l = 0; l < lams.size(); ++l) {
        fields[l].nx = fields[l].ny = 5;
        fields[l].origin = Complex(-0.002, -0.002);
        fields[l].h = 1e-3;
        fields[l].lambda = lams[l];
        fields[l].frames.assign(25, CMatrix::identity(C.dim()));
    }
    return fields;
}

} // namespace

TEST_CASE("maurer_cartan: constant identity field has zero form") {
    ConstantSet C = build_constants(3);
    auto fields = identity_fields(C, 8);
    McReport rep = maurer_cartan(fields, C, 1e-5);
    CHECK(rep.lambda0_prohibited == 0.0);
    CHECK(rep.lambda_minus1_prohibited == 0.0);
    CHECK(rep.degree_excess == 0.0);
    CHECK(rep.a12_residual == 0.0);
    CHECK(rep.a1_structure == 0.0);
}

TEST_CASE("maurer_cartan: pipeline fields obey the block pattern at h = 1e-3") {
    Rng rng(61);
    ConstantSet C = build_constants(3);
    MeromorphicFrame fr = integrate_meromorphic_frame(rng.matpoly(2, 2, 3), C);
    auto lams = roots_of_unity(16);
    double h = 1e-3;
    Complex z0(0.17, -0.21);
    auto fields = build_fields(fr, C, z0 - Complex(2 * h, 2 * h), h, 5, 5, lams);
    McReport rep = maurer_cartan(fields, C, 1e-5);
    CHECK(rep.lambda0_prohibited < 1e-5);
    CHECK(rep.lambda_minus1_prohibited < 1e-5);
    CHECK(rep.degree_excess < 1e-5);
    CHECK(rep.a12_residual < 1e-5);
    CHECK(rep.a1_structure < 1e-5);
    CHECK(rep.duplicated_rows < 1e-5);
    CHECK(rep.fd_error_estimate < 1e-5);
}

TEST_CASE("maurer_cartan: z-dependent lower-triangular gauge breaks the pattern") {
    Rng rng(62);
    ConstantSet C = build_constants(3);
    MeromorphicFrame fr = integrate_meromorphic_frame(rng.matpoly(2, 2, 2), C);
    auto lams = roots_of_unity(16);
    double h = 1e-3;
    Complex z0(0.1, 0.1);
    auto fields = build_fields(fr, C, z0 - Complex(2 * h, 2 * h), h, 5, 5, lams);
    for (FrameField& f : fields) {
        for (int iy = 0; iy < 5; ++iy)
            for (int ix = 0; ix < 5; ++ix) {
                Complex z = f.z_at(ix, iy);
                CMatrix G = CMatrix::identity(6);
                G(2, 0) = z.real(); // block (2,1) of the triangular side
                CMatrix& F = f.frames[iy * 5 + ix];
                CMatrix Ft = conjugate_P(F, C, ConjugateDirection::Forward);
                F = conjugate_P(Ft * G, C, ConjugateDirection::Backward);
            }
    }
    McReport rep = maurer_cartan(fields, C, 1e-2);
    CHECK(rep.lambda0_prohibited > 1e-2);
}

TEST_CASE("maurer_cartan: coarse stencils are rejected") {
    Rng rng(63);
    ConstantSet C = build_constants(3);
    MeromorphicFrame fr = integrate_meromorphic_frame(rng.matpoly(2, 2, 3), C);
    auto lams = roots_of_unity(8);
    double h = 0.15;
    auto fields = build_fields(fr, C, Complex(-2 * h, -2 * h), h, 5, 5, lams);
    CHECK_THROWS_AS(maurer_cartan(fields, C, 1e-9), GridTooCoarse);
}

TEST_CASE("constant_lightlike: identity field and pipeline fields") {
    ConstantSet C = build_constants(3);
    auto fields = identity_fields(C, 8);
    LightlikeResult triv = constant_lightlike(fields[0], C);
    CHECK(triv.const_residual == 0.0);
    CHECK(triv.isotropy_residual == 0.0);
    CHECK(triv.v[0] == doctest::Approx(1.0));
    CHECK(triv.v[1] == doctest::Approx(1.0));

    MatPolyZ ft(2, 2);
    ft.at(0, 0) = PolyZ::constant(1.0);
    MeromorphicFrame fr = integrate_meromorphic_frame(ft, C);
    auto lams = roots_of_unity(8);
    auto pf = build_fields(fr, C, Complex(-0.4, -0.4), 0.2, 5, 5, lams);
    for (const FrameField& f : pf) {
        CHECK(f.reality_residual() < 1e-9);
        CHECK(f.membership_residual_so1q() < 1e-8);
        LightlikeResult lr = constant_lightlike(f, C);
        CHECK(lr.const_residual < 1e-7);
        CHECK(lr.isotropy_residual < 1e-9);

        ConstVectorReport cv = constant_vector_check(f, lr.v, C);
        CHECK(cv.span_residual < 1e-8);
        CHECK(cv.causal == CausalClass::Lightlike);

        // the unit-norm normalization picks the same projective direction
        LightlikeResult lu = constant_lightlike(f, C, VectorNormalization::UnitNorm);
        CHECK(lu.const_residual < 1e-7);
        double dot = 0.0, n1 = 0.0, n2 = 0.0;
        for (size_t r = 0; r < lu.v.size(); ++r) {
            dot += lu.v[r] * lr.v[r];
            n1 += lu.v[r] * lu.v[r];
            n2 += lr.v[r] * lr.v[r];
        }
        CHECK(std::abs(std::abs(dot) / std::sqrt(n1 * n2) - 1.0) < 1e-9);
    }
}

TEST_CASE("constant_lightlike: gauge defect is detected") {
    Rng rng(64);
    ConstantSet C = build_constants(3);
    MeromorphicFrame fr = integrate_meromorphic_frame(rng.matpoly(2, 2, 2), C);
    auto lams = roots_of_unity(8);
    auto fields = build_fields(fr, C, Complex(-0.4, -0.4), 0.2, 5, 5, lams);

    // mix the first frame column into a spacelike direction by a constant boost
    double t = 0.3;
    CMatrix R = CMatrix::identity(6);
    R(0, 0) = std::cosh(t);
    R(0, 4) = std::sinh(t);
    R(4, 0) = std::sinh(t);
    R(4, 4) = std::cosh(t);
    FrameField gauged = fields[0];
    for (CMatrix& F : gauged.frames) F = F * R;
    LightlikeResult lr = constant_lightlike(gauged, C);
    CHECK(lr.const_residual > 1e-2);
}

TEST_CASE("constant_vector_check: classification at the identity") {
    ConstantSet C = build_constants(3);
    auto fields = identity_fields(C, 8);
    std::vector<double> e1{1, 0, 0, 0, 0, 0};
    ConstVectorReport cv = constant_vector_check(fields[0], e1, C);
    CHECK(cv.causal == CausalClass::Timelike);
    CHECK(cv.span_residual == 0.0);

    std::vector<double> e5{0, 0, 0, 0, 1, 0};
    Rng rng(65);
    ConstantSet C3 = build_constants(3);
    MeromorphicFrame fr = integrate_meromorphic_frame(rng.matpoly(2, 2, 2), C3);
    auto pf = build_fields(fr, C3, Complex(-0.4, -0.4), 0.2, 5, 5, roots_of_unity(8));
    ConstVectorReport cv5 = constant_vector_check(pf[0], e5, C3);
    CHECK(cv5.span_residual > 0.1);
    CHECK(cv5.causal == CausalClass::Spacelike);
}
