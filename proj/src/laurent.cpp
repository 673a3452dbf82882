#include "loopforge/laurent.hpp"

#include <cmath>

namespace loopforge {

LaurentLoop LaurentLoop::identity(int size) {
    LaurentLoop l(size);
    l.set_coeff(0, CMatrix::identity(size));
    return l;
}

LaurentLoop LaurentLoop::monomial(int degree, const CMatrix& coeff) {
    if (!coeff.is_square()) throw DimensionMismatch("LaurentLoop: coefficient not square");
    LaurentLoop l(coeff.rows());
    l.set_coeff(degree, coeff);
    return l;
}

void LaurentLoop::require_size(const CMatrix& m) const {
    if (m.rows() != size_ || m.cols() != size_)
        throw DimensionMismatch("LaurentLoop: coefficient has wrong size");
}

void LaurentLoop::set_coeff(int k, const CMatrix& m) {
    require_size(m);
    if (m.max_abs() == 0.0) {
        coeffs_.erase(k);
    } else {
        coeffs_.insert_or_assign(k, m);
    }
}

void LaurentLoop::add_coeff(int k, const CMatrix& m) {
    require_size(m);
    auto it = coeffs_.find(k);
    if (it == coeffs_.end()) {
        set_coeff(k, m);
    } else {
        it->second += m;
        if (it->second.max_abs() == 0.0) coeffs_.erase(it);
    }
}

CMatrix LaurentLoop::coeff(int k) const {
    auto it = coeffs_.find(k);
    if (it == coeffs_.end()) return CMatrix::zero(size_, size_);
    return it->second;
}

LaurentLoop LaurentLoop::operator+(const LaurentLoop& o) const {
    if (size_ != o.size_) throw DimensionMismatch("LaurentLoop add: size mismatch");
    LaurentLoop out = *this;
    for (const auto& [k, m] : o.coeffs_) out.add_coeff(k, m);
    return out;
}

LaurentLoop LaurentLoop::operator-(const LaurentLoop& o) const {
    if (size_ != o.size_) throw DimensionMismatch("LaurentLoop sub: size mismatch");
    LaurentLoop out = *this;
    for (const auto& [k, m] : o.coeffs_) out.add_coeff(k, -m);
    return out;
}

LaurentLoop LaurentLoop::operator*(const LaurentLoop& o) const {
    if (size_ != o.size_) throw DimensionMismatch("LaurentLoop mul: size mismatch");
    LaurentLoop out(size_);
    for (const auto& [ka, ma] : coeffs_)
        for (const auto& [kb, mb] : o.coeffs_) out.add_coeff(ka + kb, ma * mb);
    return out;
}

LaurentLoop LaurentLoop::operator*(const CMatrix& constant) const {
    LaurentLoop out(size_);
    for (const auto& [k, m] : coeffs_) out.set_coeff(k, m * constant);
    return out;
}

LaurentLoop operator*(const CMatrix& constant, const LaurentLoop& loop) {
    LaurentLoop out(loop.size_);
    for (const auto& [k, m] : loop.coeffs_) out.set_coeff(k, constant * m);
    return out;
}

CMatrix LaurentLoop::eval(Complex lambda) const {
    CMatrix out = CMatrix::zero(size_, size_);
    for (const auto& [k, m] : coeffs_) {
        Complex lk = std::pow(lambda, k);
        out += m * lk;
    }
    return out;
}

void LaurentLoop::prune(double tol) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->second.norm() <= tol)
            it = coeffs_.erase(it);
        else
            ++it;
    }
}

double LaurentLoop::coeff_norm() const {
    double s = 0.0;
    for (const auto& [k, m] : coeffs_) {
        double f = m.norm();
        s += f * f;
    }
    return std::sqrt(s);
}

double LaurentLoop::norm_outside(int lo, int hi) const {
    double s = 0.0;
    for (const auto& [k, m] : coeffs_) {
        if (k < lo || k > hi) {
            double f = m.norm();
            s += f * f;
        }
    }
    return std::sqrt(s);
}

} // namespace loopforge
