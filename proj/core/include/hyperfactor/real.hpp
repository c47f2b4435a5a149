#pragma once

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace hyperfactor {

/// Number of mantissa bits used for newly created values on this thread.
mpfr_prec_t working_precision() noexcept;
void set_working_precision(mpfr_prec_t bits);

/// Sets the working precision for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(mpfr_prec_t bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

/// Arbitrary-precision binary floating-point real backed by MPFR.
///
/// Copies are exact (they keep the source precision). Every arithmetic
/// result is rounded to nearest at the thread's working precision, so raising
/// the precision and recomputing promotes old values exactly.
class Real {
 public:
  Real();
  Real(long v);  // NOLINT(google-explicit-constructor)
  Real(int v) : Real(static_cast<long>(v)) {}  // NOLINT
  Real(double v);  // NOLINT
  explicit Real(long double v);
  /// Parses a decimal (or "inf"-free) string at the working precision.
  explicit Real(std::string_view decimal);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr raw() noexcept { return value_; }
  mpfr_srcptr raw() const noexcept { return value_; }
  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }

  bool is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(value_) != 0; }
  int sign() const noexcept { return mpfr_sgn(value_); }

  double to_double() const noexcept { return mpfr_get_d(value_, MPFR_RNDN); }
  long double to_long_double() const noexcept { return mpfr_get_ld(value_, MPFR_RNDN); }
  /// Mantissa in [0.5, 1) and binary exponent; zero gives (0, 0).
  long double mantissa(long& exponent) const noexcept;
  /// floor(log2 |x|) + 1 for nonzero x; a very negative value for zero.
  long exponent() const noexcept;
  long to_long() const noexcept { return mpfr_get_si(value_, MPFR_RNDZ); }

  /// Decimal scientific string with `digits` significant digits (0 = enough
  /// digits to round-trip this value's precision).
  std::string to_string(std::size_t digits = 0) const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

  friend Real operator-(const Real& a);
  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);

  friend bool operator==(const Real& a, const Real& b) noexcept {
    return mpfr_equal_p(a.value_, b.value_) != 0;
  }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b) noexcept {
    if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.value_, b.value_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

 private:
  mpfr_t value_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real log2(const Real& x);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long n);
Real root(const Real& x, unsigned long k);
Real hypot(const Real& x, const Real& y);
Real atan2(const Real& y, const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real floor(const Real& x);
Real ceil(const Real& x);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
Real ldexp(const Real& x, long e);
Real factorial(unsigned long n);
Real pi();
Real euler_e();

/// Directed-rounding helpers used for rigorous upper bounds.
Real add_up(const Real& a, const Real& b);
Real mul_up(const Real& a, const Real& b);
Real hypot_up(const Real& a, const Real& b);

std::ostream& operator<<(std::ostream& os, const Real& x);

}  // namespace hyperfactor
