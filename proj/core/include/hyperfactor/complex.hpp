#pragma once

#include <complex>
#include <iosfwd>
#include <string>

#include "hyperfactor/real.hpp"

namespace hyperfactor {

/// Complex number with `Real` parts. Parts are always finite after checked
/// operations; see `require_finite`.
struct Complex {
  Real re;
  Real im;

  Complex() = default;
  Complex(Real r) : re(std::move(r)), im() {}  // NOLINT(google-explicit-constructor)
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(long r) : re(r), im() {}  // NOLINT
  Complex(int r) : re(static_cast<long>(r)), im() {}  // NOLINT
  Complex(double r) : re(r), im() {}  // NOLINT
  Complex(double r, double i) : re(r), im(i) {}
  explicit Complex(std::complex<long double> z) : re(z.real()), im(z.imag()) {}

  bool is_zero() const noexcept { return re.is_zero() && im.is_zero(); }
  bool is_finite() const noexcept { return re.is_finite() && im.is_finite(); }
  std::complex<double> to_complex_double() const { return {re.to_double(), im.to_double()}; }
  std::complex<long double> to_complex_long_double() const {
    return {re.to_long_double(), im.to_long_double()};
  }

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex& operator*=(const Real& s);
  Complex& operator/=(const Real& s);

  friend bool operator==(const Complex& a, const Complex& b) noexcept {
    return a.re == b.re && a.im == b.im;
  }
};

Complex operator-(const Complex& a);
Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& s);
Complex operator*(const Real& s, const Complex& a);
Complex operator/(const Complex& a, const Real& s);

Real abs(const Complex& z);
/// |z| rounded toward +infinity.
Real abs_upper(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real arg(const Complex& z);
Complex conj(const Complex& z);
Complex polar(const Real& r, const Real& theta);
Complex exp(const Complex& z);
Complex pow(const Complex& z, long n);

/// Throws OverflowError if either part is NaN or infinite.
const Complex& require_finite(const Complex& z, const char* what);

/// Accumulates acc += a * b using caller-provided scratch (no allocation).
struct MulAddScratch {
  Real t1, t2;
};
void mul_add(Complex& acc, const Complex& a, const Complex& b, MulAddScratch& s);
/// out = a * b, in place, out must not alias a or b.
void mul_into(Complex& out, const Complex& a, const Complex& b);

std::ostream& operator<<(std::ostream& os, const Complex& z);

}  // namespace hyperfactor
