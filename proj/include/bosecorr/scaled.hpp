#pragma once

#include <cmath>
#include <complex>

namespace bosecorr {

using cplx = std::complex<double>;

/// Complex number stored as mantissa * exp(exponent). Conical Legendre
/// functions grow like exp(mu * theta) and overflow double for mu > ~225;
/// products of such values are formed here and only the (moderate) final
/// result is converted back.
class Scaled {
public:
    Scaled() = default;
    Scaled(cplx mantissa, double exponent = 0.0) : m_(mantissa), e_(exponent) { normalize(); }

    /// exp(z) without overflow.
    static Scaled exp(cplx z) { return Scaled(std::polar(1.0, z.imag()), z.real()); }

    cplx mantissa() const noexcept { return m_; }
    double exponent() const noexcept { return e_; }

    /// Natural log of the modulus; -inf for zero.
    double log_abs() const noexcept {
        const double a = std::abs(m_);
        return a == 0.0 ? -INFINITY : std::log(a) + e_;
    }

    /// Converts to an ordinary complex value; may overflow to inf.
    cplx value() const noexcept { return m_ * std::exp(e_); }

    /// Value divided by exp(shift), i.e. mantissa rescaled to a caller-chosen exponent.
    cplx value_scaled_by(double shift) const noexcept { return m_ * std::exp(e_ - shift); }

    bool is_zero() const noexcept { return m_ == cplx(0.0, 0.0); }

    friend Scaled operator*(const Scaled& a, const Scaled& b) {
        return Scaled(a.m_ * b.m_, a.e_ + b.e_);
    }
    friend Scaled operator/(const Scaled& a, const Scaled& b) {
        return Scaled(a.m_ / b.m_, a.e_ - b.e_);
    }
    friend Scaled operator+(const Scaled& a, const Scaled& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.e_ >= b.e_) return Scaled(a.m_ + b.m_ * std::exp(b.e_ - a.e_), a.e_);
        return Scaled(a.m_ * std::exp(a.e_ - b.e_) + b.m_, b.e_);
    }
    friend Scaled operator-(const Scaled& a, const Scaled& b) { return a + Scaled(-b.m_, b.e_); }
    friend Scaled operator*(const Scaled& a, cplx c) { return Scaled(a.m_ * c, a.e_); }
    friend Scaled operator*(cplx c, const Scaled& a) { return Scaled(a.m_ * c, a.e_); }

private:
    void normalize() {
        const double a = std::abs(m_);
        if (a == 0.0 || !std::isfinite(a)) {
            if (a == 0.0) e_ = 0.0;
            return;
        }
        const int k = std::ilogb(a);
        if (k > 64 || k < -64) {
            m_ = std::ldexp(1.0, -k) * m_;
            e_ += k * std::log(2.0);
        }
    }

    cplx m_{0.0, 0.0};
    double e_ = 0.0;
};

}  // namespace bosecorr
