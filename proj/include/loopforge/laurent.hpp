#ifndef LOOPFORGE_LAURENT_HPP
#define LOOPFORGE_LAURENT_HPP

#include <map>

#include "loopforge/cmatrix.hpp"

namespace loopforge {

/// Finite matrix Laurent polynomial in the loop parameter: sum_k coeff[k] * lambda^k.
/// All coefficients are size x size. Exactly-zero coefficients are never stored;
/// anything else is kept so that degree diagnostics stay uncontaminated.
class LaurentLoop {
public:
    explicit LaurentLoop(int size) : size_(size) {}

    static LaurentLoop identity(int size);
    static LaurentLoop monomial(int degree, const CMatrix& coeff);

    int size() const { return size_; }
    bool is_zero() const { return coeffs_.empty(); }
    int min_degree() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
    int max_degree() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

    /// Sets the lambda^k coefficient (exact zeros are dropped).
    void set_coeff(int k, const CMatrix& m);
    void add_coeff(int k, const CMatrix& m);
    /// Returns the coefficient at degree k, zero matrix if absent.
    CMatrix coeff(int k) const;
    bool has_coeff(int k) const { return coeffs_.count(k) != 0; }

    const std::map<int, CMatrix>& coeffs() const { return coeffs_; }

    LaurentLoop operator+(const LaurentLoop& o) const;
    LaurentLoop operator-(const LaurentLoop& o) const;
    LaurentLoop operator*(const LaurentLoop& o) const;
    LaurentLoop operator*(const CMatrix& constant) const;
    friend LaurentLoop operator*(const CMatrix& constant, const LaurentLoop& loop);

    CMatrix eval(Complex lambda) const;

    /// Drops coefficients of Frobenius norm <= tol.
    void prune(double tol);

    /// Frobenius norm over all stored coefficients.
    double coeff_norm() const;
    /// Norm of coefficients at degrees outside [lo, hi].
    double norm_outside(int lo, int hi) const;

private:
    int size_;
    std::map<int, CMatrix> coeffs_;

    void require_size(const CMatrix& m) const;
};

} // namespace loopforge

#endif
