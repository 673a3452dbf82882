#include "loopforge/matpoly.hpp"

#include <cmath>

namespace loopforge {

MatPolyZ::MatPolyZ(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw DimensionMismatch("MatPolyZ: negative dimension");
    e_.assign(static_cast<size_t>(rows) * cols, PolyZ{});
}

MatPolyZ MatPolyZ::constant(const CMatrix& m) {
    MatPolyZ out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) != Complex(0.0)) out.at(i, j) = PolyZ::constant(m(i, j));
    return out;
}

CMatrix MatPolyZ::eval(Complex z) const {
    CMatrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(i, j) = at(i, j).eval(z);
    return out;
}

MatPolyZ MatPolyZ::operator+(const MatPolyZ& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("MatPolyZ add: shape mismatch");
    MatPolyZ out(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k] + o.e_[k];
    return out;
}

MatPolyZ MatPolyZ::operator-(const MatPolyZ& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("MatPolyZ sub: shape mismatch");
    MatPolyZ out(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k] - o.e_[k];
    return out;
}

MatPolyZ MatPolyZ::operator-() const {
    MatPolyZ out(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = -e_[k];
    return out;
}

MatPolyZ MatPolyZ::operator*(const MatPolyZ& o) const {
    if (cols_ != o.rows_) throw DimensionMismatch("MatPolyZ mul: shape mismatch");
    MatPolyZ out(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < o.cols_; ++j) {
            PolyZ acc;
            for (int k = 0; k < cols_; ++k) acc = acc + at(i, k) * o.at(k, j);
            out.at(i, j) = acc;
        }
    return out;
}

MatPolyZ MatPolyZ::operator*(const PolyZ& p) const {
    MatPolyZ out(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k] * p;
    return out;
}

MatPolyZ MatPolyZ::operator*(Complex s) const {
    MatPolyZ out(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k] * s;
    return out;
}

MatPolyZ MatPolyZ::transpose() const {
    MatPolyZ out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

MatPolyZ MatPolyZ::derivative() const {
    MatPolyZ out(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k].derivative();
    return out;
}

MatPolyZ MatPolyZ::antiderivative() const {
    MatPolyZ out(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k].antiderivative();
    return out;
}

int MatPolyZ::max_degree() const {
    int d = -1;
    for (const PolyZ& p : e_) d = std::max(d, p.degree());
    return d;
}

CMatrix MatPolyZ::coeff_matrix(int k) const {
    CMatrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(i, j) = at(i, j).coeff(k);
    return out;
}

MatPolyZ MatPolyZ::from_coeff_matrices(const std::vector<CMatrix>& coeffs) {
    if (coeffs.empty()) return {};
    MatPolyZ out(coeffs[0].rows(), coeffs[0].cols());
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j) {
            std::vector<Complex> c(coeffs.size());
            for (size_t k = 0; k < coeffs.size(); ++k) {
                if (!coeffs[k].same_shape(coeffs[0]))
                    throw DimensionMismatch("from_coeff_matrices: inconsistent shapes");
                c[k] = coeffs[k](i, j);
            }
            out.at(i, j) = PolyZ(std::move(c));
        }
    return out;
}

bool MatPolyZ::is_zero() const {
    for (const PolyZ& p : e_)
        if (!p.is_zero()) return false;
    return true;
}

double MatPolyZ::coeff_norm() const {
    double s = 0.0;
    for (const PolyZ& p : e_) {
        double f = p.coeff_norm();
        s += f * f;
    }
    return std::sqrt(s);
}

} // namespace loopforge
