#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

#include "nflab/errors.hpp"

namespace nflab {

using Complex = std::complex<double>;

// Complex value with a separate power-of-two exponent: value = m * 2^e.
// Expression trees built from exp() nodes routinely produce magnitudes far
// outside double range (e^{+-4000} and worse); all internal evaluation runs
// on this representation and only the public accessors can overflow.
struct ScaledComplex {
  Complex m{0.0, 0.0};
  std::int64_t e{0};

  static ScaledComplex zero() { return {}; }

  static ScaledComplex from(Complex v) {
    ScaledComplex s{v, 0};
    s.normalize();
    return s;
  }

  bool is_zero() const { return m.real() == 0.0 && m.imag() == 0.0; }

  void normalize() {
    const double a = std::max(std::fabs(m.real()), std::fabs(m.imag()));
    if (a == 0.0) {
      e = 0;
      return;
    }
    if (!std::isfinite(a)) throw Error(ErrorCode::Overflow, "non-finite mantissa");
    const int k = std::ilogb(a);
    if (k != 0) {
      m = Complex(std::ldexp(m.real(), -k), std::ldexp(m.imag(), -k));
      e += k;
    }
  }

  // Natural log of |value|; -inf for zero.
  double log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(m)) + static_cast<double>(e) * 0.6931471805599453;
  }

  double arg() const { return std::arg(m); }

  // Back to a plain complex.  Throws Overflow when the value does not fit;
  // values that underflow double range flush to zero.
  Complex to_complex() const {
    if (is_zero()) return {0.0, 0.0};
    if (e > 1023) throw Error(ErrorCode::Overflow, "value exceeds double range");
    if (e < -1200) return {0.0, 0.0};
    const double re = std::ldexp(m.real(), static_cast<int>(e));
    const double im = std::ldexp(m.imag(), static_cast<int>(e));
    if (!std::isfinite(re) || !std::isfinite(im))
      throw Error(ErrorCode::Overflow, "value exceeds double range");
    return {re, im};
  }

  friend ScaledComplex operator*(const ScaledComplex& x, const ScaledComplex& y) {
    if (x.is_zero() || y.is_zero()) return zero();
    ScaledComplex r{x.m * y.m, x.e + y.e};
    r.normalize();
    return r;
  }

  friend ScaledComplex operator/(const ScaledComplex& x, const ScaledComplex& y) {
    if (y.is_zero()) throw Error(ErrorCode::Overflow, "division by exact zero");
    if (x.is_zero()) return zero();
    ScaledComplex r{x.m / y.m, x.e - y.e};
    r.normalize();
    return r;
  }

  friend ScaledComplex operator+(const ScaledComplex& x, const ScaledComplex& y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    const std::int64_t d = x.e - y.e;
    // Beyond ~2^120 the smaller term is invisible at double precision.
    if (d > 120) return x;
    if (d < -120) return y;
    ScaledComplex r;
    if (d >= 0) {
      r.m = x.m + Complex(std::ldexp(y.m.real(), static_cast<int>(-d)),
                          std::ldexp(y.m.imag(), static_cast<int>(-d)));
      r.e = x.e;
    } else {
      r.m = y.m + Complex(std::ldexp(x.m.real(), static_cast<int>(d)),
                          std::ldexp(x.m.imag(), static_cast<int>(d)));
      r.e = y.e;
    }
    r.normalize();
    return r;
  }

  friend ScaledComplex operator-(const ScaledComplex& x, const ScaledComplex& y) {
    return x + ScaledComplex{-y.m, y.e};
  }

  ScaledComplex conj() const { return {std::conj(m), e}; }
};

// exp(w) for a plain complex argument, returned in scaled form.  The real
// part is split against a two-part ln 2 so the reduced exponent stays
// accurate even for |Re w| ~ 1e6.
inline ScaledComplex scaled_exp(Complex w) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
    throw Error(ErrorCode::Overflow, "non-finite exp argument");
  static constexpr double kLn2Hi = 6.93147180369123816490e-01;
  static constexpr double kLn2Lo = 1.90821492927058770002e-10;
  const double n = std::nearbyint(w.real() / 0.6931471805599453);
  const double r = (w.real() - n * kLn2Hi) - n * kLn2Lo;
  const double mag = std::exp(r);
  ScaledComplex s{Complex(mag * std::cos(w.imag()), mag * std::sin(w.imag())),
                  static_cast<std::int64_t>(n)};
  s.normalize();
  return s;
}

// log1p(exp(x)) without overflow; used for 1 + |f|^2 denominators.
inline double softplus(double x) {
  if (x > 36.0) return x + std::exp(-x);
  if (x < -36.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

}  // namespace nflab
