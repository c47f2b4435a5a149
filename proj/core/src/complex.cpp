#include "hyperfactor/complex.hpp"

#include <ostream>

#include "hyperfactor/error.hpp"

namespace hyperfactor {

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  *this = *this * o;
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  *this = *this / o;
  return *this;
}

Complex& Complex::operator*=(const Real& s) {
  re *= s;
  im *= s;
  return *this;
}

Complex& Complex::operator/=(const Real& s) {
  re /= s;
  im /= s;
  return *this;
}

Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }

Complex operator*(const Complex& a, const Complex& b) {
  Complex out;
  mul_into(out, a, b);
  return out;
}

Complex operator/(const Complex& a, const Complex& b) {
  // Smith-free formulation is fine here: MPFR has no practical exponent limits.
  Real d = norm(b);
  if (d.is_zero()) throw PreconditionError("complex division by zero");
  Complex num = a * conj(b);
  return {num.re / d, num.im / d};
}

Complex operator*(const Complex& a, const Real& s) { return {a.re * s, a.im * s}; }
Complex operator*(const Real& s, const Complex& a) { return {a.re * s, a.im * s}; }
Complex operator/(const Complex& a, const Real& s) { return {a.re / s, a.im / s}; }

Real abs(const Complex& z) { return hypot(z.re, z.im); }
Real abs_upper(const Complex& z) { return hypot_up(z.re, z.im); }

Real norm(const Complex& z) {
  Real r;
  mpfr_fmma(r.raw(), z.re.raw(), z.re.raw(), z.im.raw(), z.im.raw(), MPFR_RNDN);
  return r;
}

Real arg(const Complex& z) { return atan2(z.im, z.re); }
Complex conj(const Complex& z) { return {z.re, -z.im}; }
Complex polar(const Real& r, const Real& theta) { return {r * cos(theta), r * sin(theta)}; }

Complex exp(const Complex& z) { return polar(exp(z.re), z.im); }

Complex pow(const Complex& z, long n) {
  if (n < 0) return Complex(1L) / pow(z, -n);
  Complex result(1L);
  Complex base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

const Complex& require_finite(const Complex& z, const char* what) {
  if (!z.is_finite()) throw OverflowError(std::string("non-finite value in ") + what);
  return z;
}

void mul_add(Complex& acc, const Complex& a, const Complex& b, MulAddScratch& s) {
  mpfr_prec_t p = working_precision();
  if (s.t1.precision() != p) {
    mpfr_set_prec(s.t1.raw(), p);
    mpfr_set_prec(s.t2.raw(), p);
  }
  mpfr_fmms(s.t1.raw(), a.re.raw(), b.re.raw(), a.im.raw(), b.im.raw(), MPFR_RNDN);
  mpfr_fmma(s.t2.raw(), a.re.raw(), b.im.raw(), a.im.raw(), b.re.raw(), MPFR_RNDN);
  mpfr_add(acc.re.raw(), acc.re.raw(), s.t1.raw(), MPFR_RNDN);
  mpfr_add(acc.im.raw(), acc.im.raw(), s.t2.raw(), MPFR_RNDN);
}

void mul_into(Complex& out, const Complex& a, const Complex& b) {
  mpfr_prec_t p = working_precision();
  mpfr_set_prec(out.re.raw(), p);
  mpfr_set_prec(out.im.raw(), p);
  mpfr_fmms(out.re.raw(), a.re.raw(), b.re.raw(), a.im.raw(), b.im.raw(), MPFR_RNDN);
  mpfr_fmma(out.im.raw(), a.re.raw(), b.im.raw(), a.im.raw(), b.re.raw(), MPFR_RNDN);
}

std::ostream& operator<<(std::ostream& os, const Complex& z) {
  return os << '(' << z.re << ", " << z.im << ')';
}

}  // namespace hyperfactor
