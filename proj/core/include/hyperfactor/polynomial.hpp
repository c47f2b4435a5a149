#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <utility>
#include <vector>

#include "hyperfactor/complex.hpp"
#include "hyperfactor/error.hpp"
#include "hyperfactor/rational.hpp"

namespace hyperfactor {

namespace detail {

inline bool is_zero_value(const Complex& z) { return z.is_zero(); }
inline bool is_zero_value(const QComplex& z) { return z.is_zero(); }

inline void mul_acc(QComplex& acc, const QComplex& a, const QComplex& b) { acc += a * b; }
inline void mul_acc(Complex& acc, const Complex& a, const Complex& b) {
  thread_local MulAddScratch scratch;
  mul_add(acc, a, b, scratch);
}

}  // namespace detail

/// Dense univariate polynomial, coefficients in ascending degree order.
///
/// Only exact zeros are trimmed from the top; see `trimmed` in poly.hpp for
/// the relative-threshold variant.
template <class T>
class Polynomial {
 public:
  /// Degree of the zero polynomial.
  static constexpr long kZeroDegree = std::numeric_limits<long>::min();

  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

  static Polynomial constant(T value) { return Polynomial(std::vector<T>{std::move(value)}); }
  static Polynomial monomial(T value, std::size_t k) {
    std::vector<T> c(k + 1);
    c[k] = std::move(value);
    return Polynomial(std::move(c));
  }
  static Polynomial z() { return monomial(T(1), 1); }

  const std::vector<T>& coeffs() const noexcept { return c_; }
  std::vector<T> release() && { return std::move(c_); }
  std::size_t size() const noexcept { return c_.size(); }
  bool is_zero() const noexcept { return c_.empty(); }
  long degree() const noexcept {
    return c_.empty() ? kZeroDegree : static_cast<long>(c_.size()) - 1;
  }

  const T& operator[](std::size_t i) const { return c_[i]; }
  T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : T(); }
  const T& leading() const {
    if (c_.empty()) throw PreconditionError("leading coefficient of zero polynomial");
    return c_.back();
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && detail::is_zero_value(c_.back())) c_.pop_back();
  }

  std::vector<T> c_;
};

using Poly = Polynomial<Complex>;
using QPoly = Polynomial<QComplex>;

template <class T>
Polynomial<T> operator+(const Polynomial<T>& a, const Polynomial<T>& b) {
  std::vector<T> out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < a.size() && i < b.size()) {
      out[i] = a[i] + b[i];
    } else {
      out[i] = i < a.size() ? a[i] : b[i];
    }
  }
  return Polynomial<T>(std::move(out));
}

template <class T>
Polynomial<T> operator-(const Polynomial<T>& a) {
  std::vector<T> out;
  out.reserve(a.size());
  for (const auto& c : a.coeffs()) out.push_back(-c);
  return Polynomial<T>(std::move(out));
}

template <class T>
Polynomial<T> operator-(const Polynomial<T>& a, const Polynomial<T>& b) {
  std::vector<T> out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < a.size() && i < b.size()) {
      out[i] = a[i] - b[i];
    } else {
      out[i] = i < a.size() ? a[i] : -b[i];
    }
  }
  return Polynomial<T>(std::move(out));
}

template <class T>
Polynomial<T> operator*(const Polynomial<T>& a, const Polynomial<T>& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<T> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (detail::is_zero_value(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) detail::mul_acc(out[i + j], a[i], b[j]);
  }
  return Polynomial<T>(std::move(out));
}

template <class T>
Polynomial<T> scale(const Polynomial<T>& p, const T& s) {
  std::vector<T> out;
  out.reserve(p.size());
  for (const auto& c : p.coeffs()) out.push_back(c * s);
  return Polynomial<T>(std::move(out));
}

/// p + c (constant added to the z^0 coefficient).
template <class T>
Polynomial<T> add_constant(const Polynomial<T>& p, const T& c) {
  std::vector<T> out = p.coeffs();
  if (out.empty()) out.emplace_back();
  out[0] = out[0] + c;
  return Polynomial<T>(std::move(out));
}

template <class T>
Polynomial<T> differentiate(const Polynomial<T>& p) {
  if (p.size() <= 1) return {};
  std::vector<T> out(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = p[i] * T(static_cast<long>(i));
  return Polynomial<T>(std::move(out));
}

/// k-th derivative via falling factorials.
template <class T>
Polynomial<T> differentiate(const Polynomial<T>& p, std::size_t k) {
  if (k == 0) return p;
  if (p.size() <= k) return {};
  std::vector<T> out(p.size() - k);
  // ff = i (i-1) ... (i-k+1), updated incrementally as i grows.
  T ff(1L);
  for (std::size_t j = 1; j <= k; ++j) ff = ff * T(static_cast<long>(j));
  for (std::size_t i = k; i < p.size(); ++i) {
    if (i > k) ff = ff * T(static_cast<long>(i)) / T(static_cast<long>(i - k));
    out[i - k] = p[i] * ff;
  }
  return Polynomial<T>(std::move(out));
}

template <class T>
Polynomial<T> antiderivative(const Polynomial<T>& p) {
  if (p.is_zero()) return {};
  std::vector<T> out(p.size() + 1);
  for (std::size_t i = 0; i < p.size(); ++i) out[i + 1] = p[i] / T(static_cast<long>(i + 1));
  return Polynomial<T>(std::move(out));
}

/// A^k p: z^i -> z^{i+k} i!/(i+k)!.
template <class T>
Polynomial<T> antiderivative(const Polynomial<T>& p, std::size_t k) {
  if (k == 0 || p.is_zero()) return p;
  std::vector<T> out(p.size() + k);
  // w = i!/(i+k)!, starting from 1/k! at i = 0.
  T w(1L);
  for (std::size_t j = 1; j <= k; ++j) w = w / T(static_cast<long>(j));
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) w = w * T(static_cast<long>(i)) / T(static_cast<long>(i + k));
    out[i + k] = p[i] * w;
  }
  return Polynomial<T>(std::move(out));
}

template <class T>
struct DivisionResult {
  Polynomial<T> quotient;
  Polynomial<T> remainder;
};

/// Euclidean division g = f q + r with deg r < deg f.
template <class T>
DivisionResult<T> divide(const Polynomial<T>& g, const Polynomial<T>& f) {
  if (f.is_zero()) throw PreconditionError("division by the zero polynomial");
  if (g.degree() < f.degree()) return {{}, g};
  const std::size_t m = f.size() - 1;
  std::vector<T> rem = g.coeffs();
  std::vector<T> quo(g.size() - m);
  const T inv_lead = T(1L) / f.leading();
  for (std::size_t i = g.size(); i-- > m;) {
    T c = rem[i] * inv_lead;
    if (!detail::is_zero_value(c)) {
      T neg = -c;
      for (std::size_t j = 0; j < m; ++j) detail::mul_acc(rem[i - m + j], neg, f[j]);
    }
    quo[i - m] = std::move(c);
  }
  rem.resize(m);
  return {Polynomial<T>(std::move(quo)), Polynomial<T>(std::move(rem))};
}

template <class T>
T eval(const Polynomial<T>& p, const T& z) {
  T acc;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * z + p[i];
  return acc;
}

/// p(z + a) by repeated synthetic division (Taylor shift).
template <class T>
Polynomial<T> shift(const Polynomial<T>& p, const T& a) {
  std::vector<T> c = p.coeffs();
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = n - 1; j-- > i;) detail::mul_acc(c[j], c[j + 1], a);
  }
  return Polynomial<T>(std::move(c));
}

/// Truncated exponential E_N(s z) = sum_{j<=N} (s z)^j / j!.
template <class T>
Polynomial<T> truncated_exp(std::size_t N, const T& s) {
  std::vector<T> c(N + 1);
  c[0] = T(1L);
  for (std::size_t j = 1; j <= N; ++j) c[j] = c[j - 1] * s / T(static_cast<long>(j));
  return Polynomial<T>(std::move(c));
}

}  // namespace hyperfactor
