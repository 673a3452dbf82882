#include "loopforge/frame.hpp"

#include <cmath>
#include <string>

namespace loopforge {

namespace {

const Complex kI(0.0, 1.0);

struct PairIntegrand {
    const PolyZ& a13;
    const PolyZ& a14;
    const PolyZ& phi; // exact antiderivative of a34

    // d/dw (b13, b14) along the path, evaluated at w.
    std::pair<Complex, Complex> operator()(Complex w) const {
        Complex p = phi.eval(w);
        Complex c = std::cos(p), s = std::sin(p);
        Complex v13 = a13.eval(w), v14 = a14.eval(w);
        return {v13 * c + v14 * s, -v13 * s + v14 * c};
    }
};

struct Quad2 {
    Complex first = 0.0, second = 0.0;
    double err = 0.0;
};

Quad2 adaptive_simpson(const PairIntegrand& f, Complex a, Complex b,
                       std::pair<Complex, Complex> fa, std::pair<Complex, Complex> fb,
                       double tol, int depth, int max_depth) {
    Complex m = 0.5 * (a + b);
    auto fm = f(m);
    Complex len = b - a;
    auto simpson = [&](std::pair<Complex, Complex> u, std::pair<Complex, Complex> v,
                       std::pair<Complex, Complex> w, Complex L) {
        return std::pair<Complex, Complex>{(u.first + 4.0 * v.first + w.first) * L / 6.0,
                                           (u.second + 4.0 * v.second + w.second) * L / 6.0};
    };
    auto whole = simpson(fa, fm, fb, len);

    Complex lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    auto flm = f(lm), frm = f(rm);
    auto left = simpson(fa, flm, fm, m - a);
    auto right = simpson(fm, frm, fb, b - m);
    Complex s1 = left.first + right.first, s2 = left.second + right.second;
    double delta = std::max(std::abs(s1 - whole.first), std::abs(s2 - whole.second));

    if (delta < 15.0 * tol || depth >= max_depth) {
        Quad2 out;
        out.first = s1 + (s1 - whole.first) / 15.0;
        out.second = s2 + (s2 - whole.second) / 15.0;
        out.err = delta / 15.0;
        return out;
    }
    Quad2 L = adaptive_simpson(f, a, m, fa, fm, tol / 2, depth + 1, max_depth);
    Quad2 R = adaptive_simpson(f, m, b, fm, fb, tol / 2, depth + 1, max_depth);
    Quad2 out;
    out.first = L.first + R.first;
    out.second = L.second + R.second;
    out.err = L.err + R.err;
    return out;
}

} // namespace

CMatrix MeromorphicFrame::H1_at(Complex z, const ConstantSet& C) const {
    const int N = C.dim();
    CMatrix H1 = CMatrix::zero(N, N);
    CMatrix fz = f.eval(z);
    H1.set_block(0, 2, fz);
    H1.set_block(2, N - 2, -sharp(fz, C));
    return H1;
}

CMatrix MeromorphicFrame::H2_at(Complex z, const ConstantSet& C) const {
    const int N = C.dim();
    CMatrix H2 = CMatrix::zero(N, N);
    H2.set_block(0, N - 2, g.eval(z));
    return H2;
}

LaurentLoop MeromorphicFrame::H_at(Complex z, const ConstantSet& C) const {
    LaurentLoop H = LaurentLoop::identity(C.dim());
    H.set_coeff(-1, H1_at(z, C));
    H.set_coeff(-2, H2_at(z, C));
    return H;
}

MeromorphicFrame integrate_meromorphic_frame(const MatPolyZ& ftilde, const ConstantSet& C) {
    if (ftilde.rows() != 2 || ftilde.cols() != C.n())
        throw ShapeViolation("integrate_meromorphic_frame: ftilde must be 2 x (2m-4)");
    MeromorphicFrame fr;
    fr.m = C.m;
    fr.ftilde = ftilde;
    fr.f = ftilde.antiderivative();
    fr.g = -(fr.f * sharp(ftilde, C)).antiderivative();
    return fr;
}

double ode_residual_H(const MeromorphicFrame& frame, const MatPolyZ& eta_minus1,
                      const ConstantSet& C, std::span<const Complex> z_samples,
                      std::span<const Complex> lambda_samples) {
    const int N = C.dim();
    MatPolyZ df = frame.f.derivative();
    MatPolyZ dg = frame.g.derivative();

    double worst = 0.0;
    for (Complex z : z_samples) {
        LaurentLoop H = frame.H_at(z, C);
        LaurentLoop Hinv = nilpotent_inverse(H, C);

        CMatrix dH1 = CMatrix::zero(N, N);
        CMatrix dfz = df.eval(z);
        dH1.set_block(0, 2, dfz);
        dH1.set_block(2, N - 2, -sharp(dfz, C));
        CMatrix dH2 = CMatrix::zero(N, N);
        dH2.set_block(0, N - 2, dg.eval(z));

        LaurentLoop dH(N);
        dH.set_coeff(-1, dH1);
        dH.set_coeff(-2, dH2);

        CMatrix Peta = conjugate_P(eta_minus1.eval(z), C, ConjugateDirection::Forward);
        LaurentLoop lhs = Hinv * dH;
        for (Complex lam : lambda_samples) {
            CMatrix rhs = Peta * (Complex(1.0) / lam);
            worst = std::max(worst, (lhs.eval(lam) - rhs).norm());
        }
    }
    return worst;
}

CMatrix F01_closed_form(const PolyZ& a13, const PolyZ& a14, const PolyZ& a34,
                        Complex z, const QuadratureConfig& cfg) {
    PolyZ phi_poly = a34.antiderivative();
    Complex phi = phi_poly.eval(z);
    Complex b13, b14;

    if (a34.is_zero()) {
        b13 = a13.antiderivative().eval(z);
        b14 = a14.antiderivative().eval(z);
    } else if (z == Complex(0.0)) {
        b13 = b14 = 0.0;
    } else {
        PairIntegrand f{a13, a14, phi_poly};
        auto fa = f(Complex(0.0));
        auto fb = f(z);
        Quad2 q = adaptive_simpson(f, Complex(0.0), z, fa, fb, cfg.target_error, 0,
                                   cfg.max_depth);
        if (q.err > cfg.target_error)
            throw QuadratureFailure("F01_closed_form: quadrature error estimate " +
                                    std::to_string(q.err) + " exceeds target");
        b13 = q.first;
        b14 = q.second;
    }

    const Complex s = 0.5 * (b13 * b13 + b14 * b14);
    CMatrix Fhat(4, 4,
                 {1.0 + s, s, b13, b14,
                  -s, 1.0 - s, -b13, -b14,
                  b13, b13, 1.0, 0.0,
                  b14, b14, 0.0, 1.0});
    CMatrix rot = CMatrix::identity(4);
    rot(2, 2) = std::cos(phi);
    rot(2, 3) = std::sin(phi);
    rot(3, 2) = -std::sin(phi);
    rot(3, 3) = std::cos(phi);
    return Fhat * rot;
}

namespace {

CMatrix integrate_F02(const MatrixFn& delta2, Complex z, int n, double step) {
    CMatrix F = CMatrix::identity(n);
    if (!delta2 || z == Complex(0.0)) return F;

    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(z) / step)));
    const double dt = 1.0 / steps;
    auto rhs = [&](double t, const CMatrix& Fv) {
        CMatrix M = delta2(t * z);
        if (M.rows() != n || M.cols() != n)
            throw ShapeViolation("wu_potential: delta2 has wrong size");
        double skew = (M + M.transpose()).norm();
        if (skew > 1e-10 * (1.0 + M.norm()))
            throw ShapeViolation("wu_potential: delta2 is not skew-symmetric");
        return Fv * (M * z);
    };
    for (int k = 0; k < steps; ++k) {
        double t = k * dt;
        CMatrix k1 = rhs(t, F);
        CMatrix k2 = rhs(t + dt / 2, F + k1 * Complex(dt / 2));
        CMatrix k3 = rhs(t + dt / 2, F + k2 * Complex(dt / 2));
        CMatrix k4 = rhs(t + dt, F + k3 * Complex(dt));
        F += (k1 + k2 * Complex(2.0) + k3 * Complex(2.0) + k4) * Complex(dt / 6.0);
    }
    return F;
}

} // namespace

WuResult wu_potential(const PolyZ& a13, const PolyZ& a14, const PolyZ& a34,
                      const MatrixFn& delta2, const MatPolyZ& B1_hol,
                      std::span<const Complex> z_samples, const WuOptions& opt) {
    if (B1_hol.rows() != 4) throw ShapeViolation("wu_potential: B1 must have 4 rows");
    const int n = B1_hol.cols();
    const Complex branch = opt.minus_i_branch ? -kI : kI;

    // Precondition: the holomorphic part already has the duplicated column
    // pattern (row2 = -row1, row4 = branch * row3), exactly on coefficients.
    for (int j = 0; j < n; ++j) {
        PolyZ r2 = B1_hol.at(1, j) + B1_hol.at(0, j);
        PolyZ r4 = B1_hol.at(3, j) - B1_hol.at(2, j) * branch;
        if (r2.coeff_norm() > 1e-13 * (1.0 + B1_hol.coeff_norm()) ||
            r4.coeff_norm() > 1e-13 * (1.0 + B1_hol.coeff_norm()))
            throw ShapeViolation("wu_potential: B1 lacks the required column pattern");
    }

    WuResult out;
    for (Complex z : z_samples) {
        CMatrix F01 = F01_closed_form(a13, a14, a34, z, opt.quadrature);
        CMatrix F02 = integrate_F02(delta2, z, n, opt.rk4_step);
        CMatrix Bhat = F01 * B1_hol.eval(z) * F02.inverse();
        double scale = 1.0 + Bhat.norm();
        for (int j = 0; j < n; ++j) {
            double v1 = std::abs(Bhat(1, j) + Bhat(0, j));
            double v2 = std::abs(Bhat(3, j) - branch * Bhat(2, j));
            out.pattern_residual = std::max(out.pattern_residual, std::max(v1, v2) / scale);
        }
        out.Bhat_samples.push_back(std::move(Bhat));
    }
    if (out.pattern_residual > 1e-8)
        throw ShapeViolation("wu_potential: dressed potential lost the column pattern, residual " +
                             std::to_string(out.pattern_residual));
    return out;
}

} // namespace loopforge
