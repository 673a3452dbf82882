#ifndef LOOPFORGE_MATPOLY_HPP
#define LOOPFORGE_MATPOLY_HPP

#include "loopforge/polyz.hpp"

namespace loopforge {

/// Matrix with polynomial-in-z entries; shape-checked arithmetic, exact
/// entrywise calculus.
class MatPolyZ {
public:
    MatPolyZ() : rows_(0), cols_(0) {}
    MatPolyZ(int rows, int cols);

    static MatPolyZ constant(const CMatrix& m);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    PolyZ& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const PolyZ& at(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

    CMatrix eval(Complex z) const;

    MatPolyZ operator+(const MatPolyZ& o) const;
    MatPolyZ operator-(const MatPolyZ& o) const;
    MatPolyZ operator-() const;
    MatPolyZ operator*(const MatPolyZ& o) const;
    MatPolyZ operator*(const PolyZ& p) const;
    MatPolyZ operator*(Complex s) const;

    MatPolyZ transpose() const;
    MatPolyZ derivative() const;
    /// Entrywise antiderivative vanishing at z = 0.
    MatPolyZ antiderivative() const;

    /// Largest entry degree; -1 when all entries are zero.
    int max_degree() const;
    /// z^k coefficients assembled as a constant matrix.
    CMatrix coeff_matrix(int k) const;
    /// Rebuild entries from z^k coefficient matrices (ascending k from 0).
    static MatPolyZ from_coeff_matrices(const std::vector<CMatrix>& coeffs);

    bool is_zero() const;
    double coeff_norm() const;

private:
    int rows_, cols_;
    std::vector<PolyZ> e_;
};

} // namespace loopforge

#endif
