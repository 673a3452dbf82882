#include "loopforge/cmatrix.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace loopforge {

namespace {

using EigenRowMajor =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenRowMajor> as_eigen(const CMatrix& m) {
    return {m.entries().data(), m.rows(), m.cols()};
}

CMatrix from_eigen(const EigenRowMajor& e) {
    CMatrix out(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
    for (int i = 0; i < e.rows(); ++i)
        for (int j = 0; j < e.cols(); ++j) out(i, j) = e(i, j);
    return out;
}

[[noreturn]] void throw_shape(const char* op, int r1, int c1, int r2, int c2) {
    throw DimensionMismatch(std::string(op) + ": incompatible shapes " +
                            std::to_string(r1) + "x" + std::to_string(c1) + " and " +
                            std::to_string(r2) + "x" + std::to_string(c2));
}

} // namespace

CMatrix::CMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw DimensionMismatch("CMatrix: negative dimension");
    e_.assign(static_cast<size_t>(rows) * cols, Complex(0.0, 0.0));
}

CMatrix::CMatrix(int rows, int cols, std::initializer_list<Complex> entries)
    : CMatrix(rows, cols) {
    if (entries.size() != e_.size())
        throw DimensionMismatch("CMatrix: initializer length does not match rows*cols");
    size_t k = 0;
    for (Complex v : entries) e_[k++] = v;
}

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(const std::vector<Complex>& d) {
    CMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

Complex CMatrix::at(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
        throw DimensionMismatch("CMatrix::at: index out of range");
    return (*this)(i, j);
}

void CMatrix::require_same_shape(const CMatrix& o, const char* op) const {
    if (!same_shape(o)) throw_shape(op, rows_, cols_, o.rows_, o.cols_);
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
    require_same_shape(o, "add");
    CMatrix out(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k] + o.e_[k];
    return out;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
    require_same_shape(o, "sub");
    CMatrix out(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k] - o.e_[k];
    return out;
}

CMatrix CMatrix::operator-() const {
    CMatrix out(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = -e_[k];
    return out;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    require_same_shape(o, "add");
    for (size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    require_same_shape(o, "sub");
    for (size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
    return *this;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
    if (cols_ != o.rows_) throw_shape("mul", rows_, cols_, o.rows_, o.cols_);
    EigenRowMajor p = as_eigen(*this) * as_eigen(o);
    return from_eigen(p);
}

CMatrix CMatrix::operator*(Complex s) const {
    CMatrix out(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k] * s;
    return out;
}

CMatrix CMatrix::transpose() const {
    CMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

CMatrix CMatrix::conjugate() const {
    CMatrix out(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = std::conj(e_[k]);
    return out;
}

CMatrix CMatrix::adjoint() const { return conjugate().transpose(); }

CMatrix CMatrix::inverse() const {
    if (!is_square()) throw DimensionMismatch("inverse: matrix not square");
    EigenRowMajor inv = as_eigen(*this).partialPivLu().inverse();
    return from_eigen(inv);
}

CMatrix CMatrix::solve(const CMatrix& rhs) const {
    if (!is_square()) throw DimensionMismatch("solve: matrix not square");
    if (rows_ != rhs.rows()) throw_shape("solve", rows_, cols_, rhs.rows(), rhs.cols());
    EigenRowMajor x = as_eigen(*this).partialPivLu().solve(EigenRowMajor(as_eigen(rhs)));
    return from_eigen(x);
}

Complex CMatrix::determinant() const {
    if (!is_square()) throw DimensionMismatch("determinant: matrix not square");
    return as_eigen(*this).determinant();
}

std::vector<double> CMatrix::singular_values() const {
    Eigen::JacobiSVD<EigenRowMajor> svd(as_eigen(*this));
    const auto& sv = svd.singularValues();
    return {sv.data(), sv.data() + sv.size()};
}

double CMatrix::norm() const {
    double s = 0.0;
    for (const Complex& v : e_) s += std::norm(v);
    return std::sqrt(s);
}

double CMatrix::max_abs() const {
    double s = 0.0;
    for (const Complex& v : e_) s = std::max(s, std::abs(v));
    return s;
}

double CMatrix::imag_norm() const {
    double s = 0.0;
    for (const Complex& v : e_) s += v.imag() * v.imag();
    return std::sqrt(s);
}

CMatrix CMatrix::real_part() const {
    CMatrix out(rows_, cols_);
    for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = Complex(e_[k].real(), 0.0);
    return out;
}

CMatrix CMatrix::block(int i0, int j0, int r, int c) const {
    if (i0 < 0 || j0 < 0 || r < 0 || c < 0 || i0 + r > rows_ || j0 + c > cols_)
        throw DimensionMismatch("block: range out of bounds");
    CMatrix out(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) out(i, j) = (*this)(i0 + i, j0 + j);
    return out;
}

void CMatrix::set_block(int i0, int j0, const CMatrix& b) {
    if (i0 < 0 || j0 < 0 || i0 + b.rows() > rows_ || j0 + b.cols() > cols_)
        throw DimensionMismatch("set_block: range out of bounds");
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    return (a - b).max_abs();
}

} // namespace loopforge
