#include "hyperfactor/construction.hpp"

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <complex>
#include <numeric>

#include "hyperfactor/error.hpp"
#include "hyperfactor/remainder.hpp"
#include "hyperfactor/roots.hpp"

namespace hyperfactor {

namespace {

struct Ratio {
  unsigned long num;
  unsigned long den;
};

// Exact rational value of the shortest decimal that round-trips e.
Ratio to_ratio(double e) {
  if (!(e > 0.0)) throw PreconditionError("exponent must be positive");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, e);
  std::string s(buf, res.ptr);
  if (s.find('e') != std::string::npos) throw PreconditionError("exponent out of supported range");
  unsigned long num = 0, den = 1;
  bool frac = false;
  for (char c : s) {
    if (c == '.') {
      frac = true;
      continue;
    }
    num = num * 10 + static_cast<unsigned long>(c - '0');
    if (frac) den *= 10;
  }
  unsigned long g = std::gcd(num, den);
  return {num / g, den / g};
}

mpz_class zpow(std::size_t base, unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

// a < n^e, exactly.
bool pow_less(std::size_t a, std::size_t n, double e) {
  Ratio q = to_ratio(e);
  return zpow(a, q.den) < zpow(n, q.num);
}

// Pairs (i, j) with |z_i - z_j| < thresh; long-double prefilter, MPFR check.
std::vector<std::pair<std::size_t, std::size_t>> close_pairs(const std::vector<Complex>& z, const Real& thresh) {
  std::vector<std::complex<long double>> zl;
  long double mx = 0.0L;
  for (const auto& x : z) {
    zl.push_back(x.to_complex_long_double());
    mx = std::max(mx, std::abs(zl.back()));
  }
  const long double pre = std::max(thresh.to_long_double() * 4.0L, mx * 1e-15L);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      if (std::abs(zl[i] - zl[j]) > pre) continue;
      if (abs(z[i] - z[j]) < thresh) out.emplace_back(i, j);
    }
  }
  return out;
}

Real separation_threshold(const std::vector<Complex>& z) {
  Real mx;
  for (const auto& x : z) mx = max(mx, abs(x));
  return ldexp(mx, -static_cast<long>(working_precision() / 4));
}

void clean_tiny_parts(Complex& z) {
  Real tol = ldexp(abs(z), -static_cast<long>(working_precision() / 2));
  if (abs(z.im) <= tol) z.im = Real();
  if (abs(z.re) <= tol) z.re = Real();
}

}  // namespace

void ConstructionConfig::validate() const {
  if (!(0.0 < exp_zero_radius && exp_zero_radius < 1.0 && 1.0 < exp_outer && exp_outer < exp_degree_cap)) {
    throw PreconditionError("construction exponents must satisfy 0 < zero_radius < 1 < outer < degree_cap");
  }
  if (perturbation_scale < 0.0) throw PreconditionError("perturbation_scale must be nonnegative");
}

std::size_t floor_pow(std::size_t n, double e) {
  Ratio q = to_ratio(e);
  long double guess = std::floor(std::pow(static_cast<long double>(n), static_cast<long double>(e)));
  auto N = static_cast<std::size_t>(std::max(0.0L, guess));
  const mpz_class target = zpow(n, q.num);
  while (N > 0 && zpow(N, q.den) > target) --N;
  while (zpow(N + 1, q.den) <= target) ++N;
  return N;
}

Real real_pow(std::size_t n, double e) {
  Ratio q = to_ratio(e);
  Real v = pow(Real(static_cast<long>(n)), static_cast<long>(q.num));
  return q.den == 1 ? v : root(v, q.den);
}

Complex choose_r(const DiffOperator& T, const GrowthConstants& gc) {
  require_nonscalar(T);
  if (T.J() != 0) throw PreconditionError("choose_r: r is not used when phi(0) = 0");
  if (T.kind() == SymbolKind::TaylorPoly) {
    Poly phi(T.symbol_coeffs());
    std::vector<Complex> zs = root_values(roots(phi));
    for (auto& z : zs) clean_tiny_parts(z);
    Real tol = ldexp(Real(1L), -static_cast<long>(working_precision() / 2));
    std::size_t best = 0;
    for (std::size_t i = 1; i < zs.size(); ++i) {
      Real mi = abs(zs[i]), mb = abs(zs[best]);
      Real scale = max(mi, mb);
      if (mi < mb - tol * scale) {
        best = i;
      } else if (abs(mi - mb) <= tol * scale && arg(zs[i]) < arg(zs[best])) {
        best = i;
      }
    }
    return zs[best];
  }
  // Translation: r real with -r Re(a) > 0; purely imaginary shifts use the
  // rotation -conj(a)/|a| instead.
  const Complex& a = T.shift();
  Complex unit;
  if (!a.re.is_zero()) {
    unit = Complex(Real(a.re.sign() > 0 ? -1L : 1L));
  } else {
    unit = -conj(a) / abs(a);
  }
  const Real e = euler_e();
  const Real log_kappa = log(gc.kappa);
  const Real abs_la = abs(T.lambda()) * abs(a);
  for (long j = 1; j < 100000; ++j) {
    Real mag = ldexp(Real(1L), j);
    Complex r = unit * mag;
    Real growth = -(r * a).re;  // log |e^{-ra}|
    Real lhs = log(abs_la * mag * e) + log_kappa;
    if (mag > Real(1L) && growth > lhs && growth > Real(3L)) return r;
  }
  throw PreconditionError("choose_r: no admissible r found");
}

GrowthConstants stage_constants(const DiffOperator& T, const Poly& f, const Poly& p, const Real& R_ref) {
  const std::size_t m = f.is_zero() ? 0 : static_cast<std::size_t>(f.degree());
  Real mu = max(max_coeff_abs(f), max_coeff_abs(p));
  return coefficient_bound_C(T, m, mu, R_ref);
}

Poly build_h_n(const Poly& f, const Poly& p, const Complex& r, std::size_t n, const DiffOperator& T,
               const ConstructionConfig& cfg) {
  if (T.J() != 0) throw PreconditionError("build_h_n requires phi(0) != 0");
  const long m = f.degree();
  if (m < 1) throw PreconditionError("build_h_n: f must be nonconstant");
  if (static_cast<long>(n) <= m) throw PreconditionError("build_h_n: need n > deg f");
  if (p.degree() >= m) throw PreconditionError("build_h_n: need deg p < deg f");
  Poly snp = right_inverse_S_power(T, n, p);
  Poly g = f - snp;
  Poly e1 = truncated_exp(n - static_cast<std::size_t>(m) - 1, -r);
  Poly e2 = truncated_exp(floor_pow(n, cfg.exp_outer), r);
  return snp + (g * e1) * e2;
}

StageWork build_quotient(const DiffOperator& T, const Poly& f, const Poly& p, std::size_t n, const Complex& r,
                         const ConstructionConfig& cfg) {
  if (f.degree() < 1) throw PreconditionError("build_q_n: f must be nonconstant");
  if (f[0].is_zero()) throw PreconditionError("build_q_n: need f(0) != 0");
  if (p.degree() >= f.degree()) throw PreconditionError("build_q_n: need deg p < deg f");
  StageWork w;
  w.n = n;
  w.r = r;
  w.zero_case = T.J() != 0;
  if (w.zero_case) {
    w.dividend = right_inverse_Sn_zero_case(T, n, p);
  } else {
    w.dividend = build_h_n(f, p, r, n, T, cfg) - f;
  }
  auto dr = divide(w.dividend, f);
  std::vector<Complex> qc = std::move(dr.quotient).release();
  if (!qc.empty()) {
    w.q0 = qc[0];
    qc[0] = Complex();
  }
  w.q = Poly(std::move(qc));
  w.rem = std::move(dr.remainder);
  w.diag.deg_q = w.q.is_zero() ? -1 : w.q.degree();
  w.diag.degree_in_window = w.diag.deg_q >= static_cast<long>(n) &&
                            pow_less(static_cast<std::size_t>(std::max(0L, w.diag.deg_q)), n, cfg.exp_degree_cap);
  w.diag.q_norm = disk_norm_upper(w.q, real_pow(n, cfg.exp_zero_radius));
  w.diag.q_linear = abs(w.q.coeff(1));
  return w;
}

void extract_zeros(StageWork& w, const ConstructionConfig& cfg) {
  Poly qp1 = add_constant(w.q, Complex(1L));
  w.zeros_ordered.clear();
  if (qp1.degree() < 1) {
    w.diag.ordering_ok = false;
    return;
  }
  std::vector<Complex> zeros = root_values(roots(qp1));
  Real thresh = separation_threshold(zeros);
  if (!close_pairs(zeros, thresh).empty()) {
    Real scale = cfg.perturbation_scale > 0.0 ? Real(cfg.perturbation_scale)
                                              : ldexp(Real(1L), -static_cast<long>(working_precision() / 4));
    zeros = perturb_repeated_zeros(zeros, scale);
    w.diag.perturbed = true;
    w.q = add_constant(from_unit_factors(zeros), Complex(-1L));
    qp1 = add_constant(w.q, Complex(1L));
    w.diag.q_norm = disk_norm_upper(w.q, real_pow(w.n, cfg.exp_zero_radius));
    w.diag.q_linear = abs(w.q.coeff(1));
  }
  w.diag.reconstruction_error = relative_coeff_error(from_unit_factors(zeros), qp1);
  Real t = Real(1L) / real_pow(w.n, cfg.exp_zero_radius);
  OrderingResult ord = order_zeros(zeros, t);
  w.zeros_ordered = std::move(ord.ordered);
  w.diag.prefix_sum_max = ord.prefix_max;
  w.diag.ordering_ok = ord.ok;
  w.diag.ordering_preconditions = ord.preconditions_hold;
  w.diag.ordering_method = ord.method;
  bool first = true;
  for (const auto& a : w.zeros_ordered) {
    Real m = abs(a);
    if (first || m < w.diag.min_zero) w.diag.min_zero = m;
    if (first || m > w.diag.max_zero) w.diag.max_zero = m;
    first = false;
  }
}

StageWork build_q_n(const DiffOperator& T, const Poly& f, const Poly& p, std::size_t n,
                    const ConstructionConfig& cfg, const Real& R_ref) {
  cfg.validate();
  Complex r;
  if (T.J() == 0) r = choose_r(T, stage_constants(T, f, p, R_ref));
  StageWork w = build_quotient(T, f, p, n, r, cfg);
  w.diag.division_error = division_identity_error(w, f);
  extract_zeros(w, cfg);
  return w;
}

Real division_identity_error(const StageWork& w, const Poly& f) {
  Poly raw_q = add_constant(w.q, w.q0);
  Real scale = max_coeff_abs(f) * max_coeff_abs(raw_q) + max_coeff_abs(w.rem) + max_coeff_abs(w.dividend);
  if (scale.is_zero()) return {};
  return max_coeff_diff(f * raw_q + w.rem, w.dividend) / scale;
}

std::vector<Complex> perturb_repeated_zeros(const std::vector<Complex>& zeros, const Real& scale) {
  if (zeros.empty()) return {};
  auto pairs = close_pairs(zeros, separation_threshold(zeros));
  if (pairs.empty()) return zeros;
  std::vector<std::size_t> parent(zeros.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [i, j] : pairs) parent[find(i)] = find(j);
  std::vector<std::vector<std::size_t>> clusters(zeros.size());
  for (std::size_t i = 0; i < zeros.size(); ++i) clusters[find(i)].push_back(i);
  std::vector<Complex> out = zeros;
  const Real two_pi = ldexp(pi(), 1);
  for (const auto& cl : clusters) {
    if (cl.size() < 2) continue;
    Complex c;
    for (std::size_t i : cl) c += zeros[i];
    c /= Real(static_cast<long>(cl.size()));
    Real rad = scale * (c.is_zero() ? Real(1L) : abs(c));
    for (std::size_t k = 0; k < cl.size(); ++k) {
      Real theta = two_pi * Real(static_cast<long>(k)) / Real(static_cast<long>(cl.size()));
      out[cl[k]] = c + polar(rad, theta);
    }
  }
  return out;
}

PrefixProductResult prefix_product_check(const std::vector<Complex>& zeros, const Real& R, const Real& eps,
                                         bool require_outside) {
  PrefixProductResult res;
  for (const auto& a : zeros) {
    if (require_outside && !(abs(a) > R)) throw PreconditionError("prefix_product_check: a zero lies inside the disk");
  }
  std::vector<Complex> c(zeros.size() + 1);
  c[0] = Complex(1L);
  Complex prod;
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    const Complex s = -(Complex(1L) / zeros[k]);
    for (std::size_t j = k + 1; j > 0; --j) {
      mul_into(prod, c[j - 1], s);
      c[j] += prod;
    }
    // sum_{i>=1} |c_i| R^i, rounded up
    Real acc;
    for (std::size_t i = k + 1; i > 0; --i) acc = add_up(mul_up(acc, R), abs_upper(c[i]));
    acc = mul_up(acc, R);
    if (acc > res.max_dev) res.max_dev = acc;
    res.deviations.push_back(std::move(acc));
  }
  res.ok = res.max_dev <= eps;
  return res;
}

TailBoundResult taylor_tail_bound(std::size_t M, std::size_t N, const Complex& r, const Real& R, const Real& sigma) {
  TailBoundResult res;
  const Real Mr(static_cast<long>(M));
  if (!(M < N)) {
    res.violation = "need M < N";
  } else if (!(sigma > Real(0L) && sigma < Real(1L))) {
    res.violation = "need 0 < sigma < 1";
  } else if (M == 0 || !(R < pow(Mr, Real(1L) - sigma))) {
    res.violation = "need R < M^(1-sigma)";
  } else if (!(pow(Mr, sigma / Real(2L)) > Real(4L) * abs(r) * euler_e())) {
    res.violation = "need M^(sigma/2) > 4|r|e";
  }
  if (!res.violation.empty()) return res;
  res.hypothesis_ok = true;
  res.bound = exp(Mr) / pow(Mr, sigma * Mr / Real(2L));
  Poly dev = add_constant(-double_taylor_product<Complex>(M, N, r), Complex(1L));
  res.measured_upper = disk_norm_upper(dev, R);
  return res;
}

}  // namespace hyperfactor
