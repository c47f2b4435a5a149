#include "hyperfactor/poly.hpp"

#include <cfloat>
#include <cmath>
#include <complex>

namespace hyperfactor {

namespace {

// Above this many complex multiply-adds the sampled lower bound switches to
// long-double evaluation with an explicit rounding-error deduction.
constexpr std::size_t kMpfrSamplingBudget = std::size_t{1} << 18;

Real sampled_max_mpfr(const Poly& p, const Real& R, std::size_t samples) {
  Real best;
  const Real two_pi = ldexp(pi(), 1);
  MulAddScratch scratch;
  for (std::size_t k = 0; k < samples; ++k) {
    Real theta = two_pi * Real(static_cast<long>(k)) / Real(static_cast<long>(samples));
    Complex z = polar(R, theta);
    Complex acc;
    Complex tmp;
    for (std::size_t i = p.size(); i-- > 0;) {
      mul_into(tmp, acc, z);
      acc = tmp + p[i];
    }
    Real a = abs(acc);
    if (a > best) best = std::move(a);
  }
  return best;
}

Real sampled_max_long_double(const Poly& p, const Real& R, std::size_t samples) {
  using cld = std::complex<long double>;
  const std::size_t n = p.size();
  // b_i = c_i R^i / M with M = max |c_i| R^i, so |b_i| <= 1.
  std::vector<Real> scaled_abs(n);
  std::vector<Complex> scaled(n);
  Real Rp(1L);
  Real M;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = p[i] * Rp;
    scaled_abs[i] = abs(scaled[i]);
    if (scaled_abs[i] > M) M = scaled_abs[i];
    Rp *= R;
  }
  if (M.is_zero()) return Real();
  std::vector<cld> b(n);
  long double l1 = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    Complex bi = scaled[i] / M;
    b[i] = bi.to_complex_long_double();
    l1 += std::abs(b[i]);
  }
  const long double two_pi = 2.0L * std::acos(-1.0L);
  long double best = 0.0L;
  for (std::size_t k = 0; k < samples; ++k) {
    long double theta = two_pi * static_cast<long double>(k) / static_cast<long double>(samples);
    cld w = std::polar(1.0L, theta);
    cld acc = 0.0L;
    for (std::size_t i = n; i-- > 0;) acc = acc * w + b[i];
    best = std::max(best, std::abs(acc));
  }
  // Horner on the unit circle: |error| <= c (n+2) eps sum |b_i|, with a
  // generous c covering complex multiplication and the rounded nodes.
  long double err = 16.0L * static_cast<long double>(n + 2) * LDBL_EPSILON * l1 + LDBL_MIN;
  long double lo = best - err;
  if (lo <= 0.0L) return Real();
  return Real(lo) * M;
}

}  // namespace

std::size_t default_samples(const Poly& p) {
  const long d = p.is_zero() ? 0 : p.degree();
  return std::max<std::size_t>(4 * static_cast<std::size_t>(d) + 64, 256);
}

Real disk_norm_upper(const Poly& p, const Real& R) {
  if (R.sign() < 0) throw PreconditionError("disk_norm: negative radius");
  Real acc;
  for (std::size_t i = p.size(); i-- > 0;) acc = add_up(mul_up(acc, R), abs_upper(p[i]));
  return acc;
}

DiskNormEstimate disk_norm(const Poly& p, const Real& R, std::size_t samples) {
  if (samples == 0) throw PreconditionError("disk_norm: samples must be positive");
  DiskNormEstimate est;
  est.radius = R;
  est.samples = samples;
  est.upper = disk_norm_upper(p, R);
  if (p.is_zero()) return est;
  if (p.size() * samples <= kMpfrSamplingBudget) {
    est.lower = sampled_max_mpfr(p, R, samples);
  } else {
    est.lower = sampled_max_long_double(p, R, samples);
  }
  if (est.lower > est.upper) est.lower = est.upper;
  return est;
}

DiskNormEstimate disk_norm(const Poly& p, const Real& R) { return disk_norm(p, R, default_samples(p)); }

Real max_coeff_abs(const Poly& p) {
  Real m;
  for (const auto& c : p.coeffs()) {
    Real a = abs(c);
    if (a > m) m = std::move(a);
  }
  return m;
}

Real max_coeff_diff(const Poly& a, const Poly& b) {
  Real m;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    Real d = abs(a.coeff(i) - b.coeff(i));
    if (d > m) m = std::move(d);
  }
  return m;
}

Real relative_coeff_error(const Poly& a, const Poly& b) {
  Real scale = max(max_coeff_abs(a), max_coeff_abs(b));
  Real diff = max_coeff_diff(a, b);
  if (scale.is_zero()) return diff;
  return diff / scale;
}

Poly trimmed(const Poly& p, const Real& rel_tol) {
  Real thresh = max_coeff_abs(p) * rel_tol;
  std::vector<Complex> c = p.coeffs();
  while (!c.empty() && abs(c.back()) <= thresh) c.pop_back();
  return Poly(std::move(c));
}

Poly from_roots(const std::vector<Complex>& roots, const Complex& lead) {
  std::vector<Complex> c(roots.size() + 1);
  c[0] = lead;
  Complex prod;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const Complex neg = -roots[k];
    // c[0..k] <- c[0..k] * (z - root)
    c[k + 1] = c[k];
    for (std::size_t j = k; j > 0; --j) {
      mul_into(prod, c[j], neg);
      c[j] = c[j - 1] + prod;
    }
    mul_into(prod, c[0], neg);
    std::swap(c[0], prod);
  }
  return Poly(std::move(c));
}

Poly from_unit_factors(const std::vector<Complex>& zeros) {
  std::vector<Complex> c(zeros.size() + 1);
  c[0] = Complex(1L);
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    const Complex s = -(Complex(1L) / zeros[k]);
    // c <- c * (1 + s z)
    Complex prod;
    for (std::size_t j = k + 1; j > 0; --j) {
      mul_into(prod, c[j - 1], s);
      c[j] += prod;
    }
  }
  return Poly(std::move(c));
}

Poly to_poly(const QPoly& p) {
  std::vector<Complex> c(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    mpfr_set_q(c[i].re.raw(), p[i].re.get_mpq_t(), MPFR_RNDN);
    mpfr_set_q(c[i].im.raw(), p[i].im.get_mpq_t(), MPFR_RNDN);
  }
  return Poly(std::move(c));
}

}  // namespace hyperfactor
