#pragma once

#include <gmpxx.h>

#include <ostream>

namespace hyperfactor {

/// Exact Gaussian rational re + i·im. Used by the exact-arithmetic test mode.
struct QComplex {
  mpq_class re;
  mpq_class im;

  QComplex() : re(0), im(0) {}
  QComplex(mpq_class r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  QComplex(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}
  QComplex(long r) : re(r), im(0) {}  // NOLINT
  QComplex(int r) : re(r), im(0) {}   // NOLINT

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }

  QComplex& operator+=(const QComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  QComplex& operator-=(const QComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  QComplex& operator*=(const QComplex& o) {
    mpq_class r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  QComplex& operator/=(const QComplex& o) {
    mpq_class d = o.re * o.re + o.im * o.im;
    mpq_class r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = std::move(r);
    return *this;
  }

  friend bool operator==(const QComplex& a, const QComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }
  friend QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
  friend QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
  friend QComplex operator*(QComplex a, const QComplex& b) { return a *= b; }
  friend QComplex operator/(QComplex a, const QComplex& b) { return a /= b; }
};

inline std::ostream& operator<<(std::ostream& os, const QComplex& z) {
  return os << '(' << z.re << ", " << z.im << ')';
}

}  // namespace hyperfactor
