#ifndef LOOPFORGE_CMATRIX_HPP
#define LOOPFORGE_CMATRIX_HPP

#include <complex>
#include <initializer_list>
#include <vector>

#include "loopforge/errors.hpp"

namespace loopforge {

using Complex = std::complex<double>;

/// Dense complex matrix with row-major storage and shape-checked arithmetic.
/// Dimension mismatches throw DimensionMismatch; there is no broadcasting.
class CMatrix {
public:
    CMatrix() : rows_(0), cols_(0) {}
    CMatrix(int rows, int cols);
    CMatrix(int rows, int cols, std::initializer_list<Complex> entries);

    static CMatrix identity(int n);
    static CMatrix zero(int rows, int cols) { return CMatrix(rows, cols); }
    static CMatrix diagonal(const std::vector<Complex>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const Complex& operator()(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }
    Complex at(int i, int j) const;

    const std::vector<Complex>& entries() const { return e_; }

    CMatrix operator+(const CMatrix& o) const;
    CMatrix operator-(const CMatrix& o) const;
    CMatrix operator-() const;
    CMatrix operator*(const CMatrix& o) const;
    CMatrix operator*(Complex s) const;
    friend CMatrix operator*(Complex s, const CMatrix& m) { return m * s; }
    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);

    CMatrix transpose() const;
    CMatrix conjugate() const;
    CMatrix adjoint() const;

    /// Inverse of a square matrix (partial-pivot LU).
    CMatrix inverse() const;
    /// Solves this * X = rhs for square `this`.
    CMatrix solve(const CMatrix& rhs) const;
    Complex determinant() const;

    /// Singular values in decreasing order.
    std::vector<double> singular_values() const;

    double norm() const;      // Frobenius
    double max_abs() const;
    double imag_norm() const; // Frobenius norm of the imaginary part
    CMatrix real_part() const;

    CMatrix block(int i0, int j0, int r, int c) const;
    void set_block(int i0, int j0, const CMatrix& b);

    bool same_shape(const CMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
    int rows_, cols_;
    std::vector<Complex> e_;

    void require_same_shape(const CMatrix& o, const char* op) const;
};

/// max_ij |A_ij - B_ij|; shapes must agree.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

} // namespace loopforge

#endif
