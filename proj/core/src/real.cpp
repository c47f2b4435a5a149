#include "hyperfactor/real.hpp"

#include <cmath>
#include <cstdlib>
#include <memory>
#include <ostream>
#include <string>

#include "hyperfactor/error.hpp"

namespace hyperfactor {

namespace {

thread_local mpfr_prec_t g_precision = 256;

struct MpfrString {
  char* s = nullptr;
  ~MpfrString() {
    if (s != nullptr) mpfr_free_str(s);
  }
};

}  // namespace

mpfr_prec_t working_precision() noexcept { return g_precision; }

void set_working_precision(mpfr_prec_t bits) {
  if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX) {
    throw PreconditionError("working precision out of range: " + std::to_string(bits));
  }
  g_precision = bits;
}

PrecisionScope::PrecisionScope(mpfr_prec_t bits) : saved_(g_precision) {
  set_working_precision(bits);
}

PrecisionScope::~PrecisionScope() { g_precision = saved_; }

Real::Real() {
  mpfr_init2(value_, g_precision);
  mpfr_set_zero(value_, 1);
}

Real::Real(long v) {
  mpfr_init2(value_, g_precision);
  mpfr_set_si(value_, v, MPFR_RNDN);
}

Real::Real(double v) {
  mpfr_init2(value_, g_precision);
  mpfr_set_d(value_, v, MPFR_RNDN);
}

Real::Real(long double v) {
  mpfr_init2(value_, g_precision);
  mpfr_set_ld(value_, v, MPFR_RNDN);
}

Real::Real(std::string_view decimal) {
  mpfr_init2(value_, g_precision);
  std::string s(decimal);
  // Trim surrounding whitespace; MPFR rejects it.
  auto first = s.find_first_not_of(" \t\n\r");
  auto last = s.find_last_not_of(" \t\n\r");
  if (first == std::string::npos) {
    mpfr_clear(value_);
    throw ParseError("empty decimal string");
  }
  s = s.substr(first, last - first + 1);
  char* end = nullptr;
  mpfr_strtofr(value_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == s.c_str() || *end != '\0' || !mpfr_number_p(value_)) {
    mpfr_clear(value_);
    throw ParseError("not a finite decimal number: '" + s + "'");
  }
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

long double Real::mantissa(long& exponent) const noexcept {
  if (mpfr_zero_p(value_)) {
    exponent = 0;
    return 0.0L;
  }
  return mpfr_get_ld_2exp(&exponent, value_, MPFR_RNDN);
}

long Real::exponent() const noexcept {
  if (!mpfr_regular_p(value_)) return mpfr_zero_p(value_) ? -(1L << 40) : (1L << 40);
  return mpfr_get_exp(value_);
}

std::string Real::to_string(std::size_t digits) const {
  if (mpfr_zero_p(value_)) return mpfr_signbit(value_) ? "-0" : "0";
  if (!mpfr_number_p(value_)) return mpfr_nan_p(value_) ? "nan" : (mpfr_sgn(value_) > 0 ? "inf" : "-inf");
  if (digits == 0) {
    digits = static_cast<std::size_t>(std::ceil(static_cast<double>(precision()) * 0.30102999566398120)) + 2;
  }
  mpfr_exp_t exp10 = 0;
  MpfrString str;
  str.s = mpfr_get_str(nullptr, &exp10, 10, digits, value_, MPFR_RNDN);
  std::string mant(str.s);
  std::string sign;
  if (!mant.empty() && mant[0] == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  // Strip trailing zeros of the mantissa but keep at least one digit.
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
  std::string out = sign + mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  long e = static_cast<long>(exp10) - 1;
  if (e != 0) out += "e" + std::to_string(e);
  return out;
}

Real& Real::operator+=(const Real& o) {
  Real r;
  mpfr_add(r.value_, value_, o.value_, MPFR_RNDN);
  return *this = std::move(r);
}

Real& Real::operator-=(const Real& o) {
  Real r;
  mpfr_sub(r.value_, value_, o.value_, MPFR_RNDN);
  return *this = std::move(r);
}

Real& Real::operator*=(const Real& o) {
  Real r;
  mpfr_mul(r.value_, value_, o.value_, MPFR_RNDN);
  return *this = std::move(r);
}

Real& Real::operator/=(const Real& o) {
  Real r;
  mpfr_div(r.value_, value_, o.value_, MPFR_RNDN);
  return *this = std::move(r);
}

Real operator-(const Real& a) {
  Real r;
  mpfr_neg(r.value_, a.value_, MPFR_RNDN);
  return r;
}

Real operator+(const Real& a, const Real& b) {
  Real r;
  mpfr_add(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r;
  mpfr_sub(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r;
  mpfr_mul(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  Real r;
  mpfr_div(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

#define HF_UNARY(name, fn)            \
  Real name(const Real& x) {          \
    Real r;                           \
    fn(r.raw(), x.raw(), MPFR_RNDN);  \
    return r;                         \
  }

HF_UNARY(abs, mpfr_abs)
HF_UNARY(sqrt, mpfr_sqrt)
HF_UNARY(exp, mpfr_exp)
HF_UNARY(log, mpfr_log)
HF_UNARY(log2, mpfr_log2)
HF_UNARY(sin, mpfr_sin)
HF_UNARY(cos, mpfr_cos)

#undef HF_UNARY

Real floor(const Real& x) {
  Real r;
  mpfr_floor(r.raw(), x.raw());
  return r;
}

Real ceil(const Real& x) {
  Real r;
  mpfr_ceil(r.raw(), x.raw());
  return r;
}

Real pow(const Real& x, const Real& y) {
  Real r;
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r;
  mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
  return r;
}

Real root(const Real& x, unsigned long k) {
  Real r;
  mpfr_rootn_ui(r.raw(), x.raw(), k, MPFR_RNDN);
  return r;
}

Real hypot(const Real& x, const Real& y) {
  Real r;
  mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

Real atan2(const Real& y, const Real& x) {
  Real r;
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

Real ldexp(const Real& x, long e) {
  Real r;
  mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
  return r;
}

Real factorial(unsigned long n) {
  Real r;
  mpfr_fac_ui(r.raw(), n, MPFR_RNDN);
  return r;
}

Real pi() {
  Real r;
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

Real euler_e() {
  Real one(1L);
  return exp(one);
}

Real add_up(const Real& a, const Real& b) {
  Real r;
  mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDU);
  return r;
}

Real mul_up(const Real& a, const Real& b) {
  Real r;
  mpfr_mul(r.raw(), a.raw(), b.raw(), MPFR_RNDU);
  return r;
}

Real hypot_up(const Real& a, const Real& b) {
  Real r;
  mpfr_hypot(r.raw(), a.raw(), b.raw(), MPFR_RNDU);
  return r;
}

std::ostream& operator<<(std::ostream& os, const Real& x) {
  auto p = os.precision();
  return os << x.to_string(p > 0 ? static_cast<std::size_t>(p) : 6);
}

}  // namespace hyperfactor
