#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace graphent {

using BigInt = mpz_class;
using Rational = mpq_class;

// Natural log of a positive big integer without converting through double
// (8^400 overflows a double, its log does not).
inline double log_big(const BigInt& value) {
  if (sgn(value) <= 0) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

inline std::string to_decimal(const BigInt& value) { return value.get_str(10); }

inline std::string to_fraction(const Rational& value) {
  Rational canonical(value);
  canonical.canonicalize();
  return canonical.get_str(10);  // integers print without "/1"
}

inline Rational parse_fraction(const std::string& text) {
  Rational value(text, 10);
  value.canonicalize();
  return value;
}

// Rounds to 12 significant digits so that serialized reals are stable
// across platforms.
inline double round12(double value) {
  if (!std::isfinite(value)) return value;
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return std::strtod(buffer, nullptr);
}

/// Exact complex number with rational real and imaginary parts.
struct ComplexRational {
  Rational re;
  Rational im;

  ComplexRational() : re(0), im(0) {}
  ComplexRational(long value) : re(value), im(0) {}  // NOLINT implicit
  ComplexRational(Rational real, Rational imag = 0)
      : re(std::move(real)), im(std::move(imag)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }

  ComplexRational conj() const { return {re, -im}; }

  friend ComplexRational operator+(const ComplexRational& a,
                                   const ComplexRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a,
                                   const ComplexRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a) {
    return {-a.re, -a.im};
  }
  friend ComplexRational operator*(const ComplexRational& a,
                                   const ComplexRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ComplexRational operator/(const ComplexRational& a,
                                   const ComplexRational& b) {
    const Rational norm = b.re * b.re + b.im * b.im;
    const ComplexRational num = a * b.conj();
    return {num.re / norm, num.im / norm};
  }
  ComplexRational& operator+=(const ComplexRational& other) {
    re += other.re;
    im += other.im;
    return *this;
  }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

}  // namespace graphent
