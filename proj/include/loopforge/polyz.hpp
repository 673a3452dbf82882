#ifndef LOOPFORGE_POLYZ_HPP
#define LOOPFORGE_POLYZ_HPP

#include <initializer_list>
#include <vector>

#include "loopforge/cmatrix.hpp"

namespace loopforge {

/// Univariate polynomial in z with complex coefficients, ascending degree.
/// Trailing exactly-zero coefficients are trimmed; the zero polynomial has an
/// empty coefficient vector.
class PolyZ {
public:
    PolyZ() = default;
    PolyZ(std::initializer_list<Complex> coeffs) : c_(coeffs) { trim(); }
    explicit PolyZ(std::vector<Complex> coeffs) : c_(std::move(coeffs)) { trim(); }

    static PolyZ constant(Complex v) { return PolyZ({v}); }
    static PolyZ variable() { return PolyZ({Complex(0.0), Complex(1.0)}); }

    bool is_zero() const { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    Complex coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : Complex(0.0);
    }
    const std::vector<Complex>& coeffs() const { return c_; }

    Complex eval(Complex z) const;
    PolyZ derivative() const;
    /// Antiderivative normalized to vanish at z = 0.
    PolyZ antiderivative() const;

    PolyZ operator+(const PolyZ& o) const;
    PolyZ operator-(const PolyZ& o) const;
    PolyZ operator-() const;
    PolyZ operator*(const PolyZ& o) const;
    PolyZ operator*(Complex s) const;
    friend PolyZ operator*(Complex s, const PolyZ& p) { return p * s; }

    bool operator==(const PolyZ& o) const { return c_ == o.c_; }

    /// Euclidean norm of the coefficient vector.
    double coeff_norm() const;

private:
    std::vector<Complex> c_;
    void trim();
};

/// Free-function alias matching the operation vocabulary.
inline PolyZ antiderivative(const PolyZ& p) { return p.antiderivative(); }

} // namespace loopforge

#endif
