#include "loopforge/polyz.hpp"

#include <cmath>

namespace loopforge {

void PolyZ::trim() {
    while (!c_.empty() && c_.back() == Complex(0.0)) c_.pop_back();
}

Complex PolyZ::eval(Complex z) const {
    Complex r(0.0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * z + *it;
    return r;
}

PolyZ PolyZ::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Complex> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return PolyZ(std::move(d));
}

PolyZ PolyZ::antiderivative() const {
    if (c_.empty()) return {};
    std::vector<Complex> a(c_.size() + 1, Complex(0.0));
    for (size_t k = 0; k < c_.size(); ++k) a[k + 1] = c_[k] / static_cast<double>(k + 1);
    return PolyZ(std::move(a));
}

PolyZ PolyZ::operator+(const PolyZ& o) const {
    std::vector<Complex> r(std::max(c_.size(), o.c_.size()), Complex(0.0));
    for (size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
    for (size_t k = 0; k < o.c_.size(); ++k) r[k] += o.c_[k];
    return PolyZ(std::move(r));
}

PolyZ PolyZ::operator-(const PolyZ& o) const {
    std::vector<Complex> r(std::max(c_.size(), o.c_.size()), Complex(0.0));
    for (size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
    for (size_t k = 0; k < o.c_.size(); ++k) r[k] -= o.c_[k];
    return PolyZ(std::move(r));
}

PolyZ PolyZ::operator-() const {
    std::vector<Complex> r(c_);
    for (Complex& v : r) v = -v;
    return PolyZ(std::move(r));
}

PolyZ PolyZ::operator*(const PolyZ& o) const {
    if (c_.empty() || o.c_.empty()) return {};
    std::vector<Complex> r(c_.size() + o.c_.size() - 1, Complex(0.0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return PolyZ(std::move(r));
}

PolyZ PolyZ::operator*(Complex s) const {
    std::vector<Complex> r(c_);
    for (Complex& v : r) v *= s;
    return PolyZ(std::move(r));
}

double PolyZ::coeff_norm() const {
    double s = 0.0;
    for (const Complex& v : c_) s += std::norm(v);
    return std::sqrt(s);
}

} // namespace loopforge
