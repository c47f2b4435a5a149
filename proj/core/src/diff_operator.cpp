#include "hyperfactor/diff_operator.hpp"

#include <sstream>

#include "hyperfactor/error.hpp"
#include "hyperfactor/roots.hpp"

namespace hyperfactor {

namespace {

std::string short_complex(const Complex& z) {
  std::ostringstream os;
  os << z.re.to_string(17);
  if (!z.im.is_zero()) os << (z.im.sign() < 0 ? "-" : "+") << abs(z.im).to_string(17) << "i";
  return os.str();
}

std::vector<Complex> factorial_table(std::size_t n) {
  std::vector<Complex> f(n);
  if (n == 0) return f;
  f[0] = Complex(1L);
  for (std::size_t k = 1; k < n; ++k) f[k] = f[k - 1] * Real(static_cast<long>(k));
  return f;
}

}  // namespace

DiffOperator DiffOperator::taylor(std::vector<Complex> coeffs) {
  while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
  if (coeffs.empty()) throw PreconditionError("operator symbol is identically zero");
  for (const auto& c : coeffs) require_finite(c, "operator symbol");
  DiffOperator T;
  T.kind_ = SymbolKind::TaylorPoly;
  T.coeffs_ = std::move(coeffs);
  while (T.coeffs_[T.J_].is_zero()) ++T.J_;
  T.compute_type_constants();
  return T;
}

DiffOperator DiffOperator::translation(Complex lambda, Complex shift) {
  if (lambda.is_zero()) throw PreconditionError("translation operator needs lambda != 0");
  require_finite(lambda, "translation lambda");
  require_finite(shift, "translation shift");
  DiffOperator T;
  T.kind_ = SymbolKind::ScaledTranslation;
  T.lambda_ = std::move(lambda);
  T.shift_ = std::move(shift);
  T.J_ = 0;
  T.compute_type_constants();
  return T;
}

void DiffOperator::compute_type_constants() {
  if (kind_ == SymbolKind::ScaledTranslation) {
    alpha_ = ldexp(max(Real(1L), abs(lambda_)), 1);
    beta_ = ldexp(max(Real(1L), abs(shift_)), 1);
    return;
  }
  // beta = 2 max(1, max_{j>=1} |a_j j!|^{1/j}); alpha = 2 max(1, max_j |a_j| j! / beta^j).
  Real b(1L);
  Real fact(1L);
  for (std::size_t j = 1; j < coeffs_.size(); ++j) {
    fact *= Real(static_cast<long>(j));
    if (coeffs_[j].is_zero()) continue;
    Real v = root(abs(coeffs_[j]) * fact, j);
    if (v > b) b = v;
  }
  beta_ = ldexp(b, 1);
  Real a(1L);
  fact = Real(1L);
  Real bp(1L);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (j > 0) {
      fact *= Real(static_cast<long>(j));
      bp *= beta_;
    }
    Real v = abs(coeffs_[j]) * fact / bp;
    if (v > a) a = v;
  }
  alpha_ = ldexp(a, 1);
}

bool DiffOperator::is_scalar() const noexcept {
  if (kind_ == SymbolKind::ScaledTranslation) return shift_.is_zero();
  return coeffs_.size() <= 1;
}

const std::vector<Complex>& DiffOperator::symbol_coeffs() const {
  if (kind_ != SymbolKind::TaylorPoly) throw PreconditionError("symbol_coeffs: not a polynomial symbol");
  return coeffs_;
}

const Complex& DiffOperator::lambda() const {
  if (kind_ != SymbolKind::ScaledTranslation) throw PreconditionError("lambda: not a translation");
  return lambda_;
}

const Complex& DiffOperator::shift() const {
  if (kind_ != SymbolKind::ScaledTranslation) throw PreconditionError("shift: not a translation");
  return shift_;
}

Complex DiffOperator::coeff(std::size_t j) const {
  if (kind_ == SymbolKind::TaylorPoly) return j < coeffs_.size() ? coeffs_[j] : Complex();
  return lambda_ * pow(shift_, static_cast<long>(j)) / factorial(j);
}

long DiffOperator::symbol_degree() const noexcept {
  return kind_ == SymbolKind::TaylorPoly ? static_cast<long>(coeffs_.size()) - 1 : -1;
}

Poly DiffOperator::truncated_symbol_poly(std::size_t m) const {
  std::vector<Complex> c;
  if (kind_ == SymbolKind::TaylorPoly) {
    for (std::size_t j = 0; j <= m && j < coeffs_.size(); ++j) c.push_back(coeffs_[j]);
  } else {
    Complex t = lambda_;
    for (std::size_t j = 0; j <= m; ++j) {
      if (j > 0) t = t * shift_ / Real(static_cast<long>(j));
      c.push_back(t);
    }
  }
  return Poly(std::move(c));
}

std::string DiffOperator::describe() const {
  std::ostringstream os;
  if (kind_ == SymbolKind::ScaledTranslation) {
    os << "lambda*exp(a*D) with lambda=" << short_complex(lambda_) << ", a=" << short_complex(shift_);
    return os.str();
  }
  os << "phi(D), phi(z) =";
  bool first = true;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j].is_zero()) continue;
    os << (first ? " " : " + ") << "(" << short_complex(coeffs_[j]) << ")";
    if (j == 1) os << "z";
    if (j > 1) os << "z^" << j;
    first = false;
  }
  return os.str();
}

void require_nonscalar(const DiffOperator& T) {
  if (!T.is_scalar()) return;
  if (T.kind() == SymbolKind::ScaledTranslation) {
    throw PreconditionError("operator is scalar: translation shift a must be nonzero");
  }
  throw PreconditionError("operator is scalar: some symbol coefficient a_j with j >= 1 must be nonzero");
}

Poly apply_series(const std::vector<Complex>& c, const Poly& p) {
  const std::size_t L = p.size();
  if (L == 0) return {};
  // out_i = (1/i!) sum_j c_j (i+j)! p_{i+j}
  std::vector<Complex> fact = factorial_table(L);
  std::vector<Complex> u(L);
  for (std::size_t k = 0; k < L; ++k) mul_into(u[k], p[k], fact[k]);
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < c.size() && j < L; ++j) {
    if (!c[j].is_zero()) support.push_back(j);
  }
  std::vector<Complex> out(L);
  MulAddScratch scratch;
  for (std::size_t i = 0; i < L; ++i) {
    Complex acc;
    for (std::size_t j : support) {
      if (i + j >= L) break;
      mul_add(acc, c[j], u[i + j], scratch);
    }
    out[i] = acc / fact[i].re;
  }
  return Poly(std::move(out));
}

Poly apply(const DiffOperator& T, const Poly& p) {
  if (T.kind() == SymbolKind::ScaledTranslation) return scale(shift(p, T.shift()), T.lambda());
  return apply_series(T.symbol_coeffs(), p);
}

Poly apply_via_series(const DiffOperator& T, const Poly& p) {
  std::vector<Complex> c;
  for (std::size_t j = 0; j < p.size(); ++j) c.push_back(T.coeff(j));
  return apply_series(c, p);
}

std::vector<Complex> symbol_power(const DiffOperator& T, std::size_t n, std::size_t L) {
  std::vector<Complex> g(L);
  if (L == 0) return g;
  if (T.kind() == SymbolKind::ScaledTranslation) {
    // lambda^n e^{n a z}
    Complex na = T.shift() * Real(static_cast<long>(n));
    g[0] = pow(T.lambda(), static_cast<long>(n));
    for (std::size_t j = 1; j < L; ++j) g[j] = g[j - 1] * na / Real(static_cast<long>(j));
    return g;
  }
  const auto& a = T.symbol_coeffs();
  const std::size_t J = T.J();
  if (n == 0) {
    g[0] = Complex(1L);
    return g;
  }
  if (J * n >= L) return g;
  const std::vector<Complex> psi(a.begin() + static_cast<long>(J), a.end());
  const std::size_t Lp = L - J * n;
  std::vector<Complex> h(Lp);
  const std::size_t d = psi.size() - 1;
  if (d == 0) {
    h[0] = pow(psi[0], static_cast<long>(n));
  } else if (n <= 4) {
    h[0] = Complex(1L);
    MulAddScratch scratch;
    for (std::size_t t = 0; t < n; ++t) {
      std::vector<Complex> nh(Lp);
      for (std::size_t i = 0; i < Lp; ++i) {
        if (h[i].is_zero()) continue;
        for (std::size_t j = 0; j <= d && i + j < Lp; ++j) mul_add(nh[i + j], h[i], psi[j], scratch);
      }
      h = std::move(nh);
    }
  } else {
    // Power recurrence: h_k = 1/(k psi_0) sum_{j=1}^{min(k,d)} ((n+1) j - k) psi_j h_{k-j}.
    h[0] = pow(psi[0], static_cast<long>(n));
    const Complex inv0 = Complex(1L) / psi[0];
    MulAddScratch scratch;
    for (std::size_t k = 1; k < Lp; ++k) {
      Complex acc;
      for (std::size_t j = 1; j <= std::min(k, d); ++j) {
        long w = static_cast<long>((n + 1) * j) - static_cast<long>(k);
        if (w == 0 || psi[j].is_zero()) continue;
        mul_add(acc, psi[j] * Real(w), h[k - j], scratch);
      }
      h[k] = acc * inv0 / Real(static_cast<long>(k));
    }
  }
  for (std::size_t i = 0; i < Lp; ++i) g[i + J * n] = std::move(h[i]);
  return g;
}

Poly apply_n(const DiffOperator& T, std::size_t n, const Poly& p) {
  if (n == 0 || p.is_zero()) return p;
  if (n == 1) return apply(T, p);
  if (T.kind() == SymbolKind::ScaledTranslation) {
    Complex na = T.shift() * Real(static_cast<long>(n));
    Poly out = scale(shift(p, na), pow(T.lambda(), static_cast<long>(n)));
    for (const auto& c : out.coeffs()) require_finite(c, "apply_n");
    return out;
  }
  Poly out = apply_series(symbol_power(T, n, p.size()), p);
  for (const auto& c : out.coeffs()) require_finite(c, "apply_n");
  return out;
}

TruncatedSymbol truncated_symbol(const DiffOperator& T, std::size_t m) {
  if (T.J() != 0) throw PreconditionError("truncated_symbol requires a_0 != 0 (J = 0)");
  TruncatedSymbol ts;
  ts.degree_cap = m;
  ts.a0 = T.coeff(0);
  Poly t = T.truncated_symbol_poly(m);
  if (t.degree() >= 1) ts.roots = root_values(roots(t));
  return ts;
}

RightInverse::RightInverse(const DiffOperator& T, std::size_t m) : ts_(truncated_symbol(T, m)) {
  inv_a0_ = Complex(1L) / ts_.a0;
  for (const auto& r : ts_.roots) inv_roots_.push_back(Complex(1L) / r);
}

Poly RightInverse::operator()(const Poly& p) const {
  if (p.degree() > static_cast<long>(ts_.degree_cap)) {
    throw PreconditionError("right inverse applied above its degree cap");
  }
  Poly out = p;
  for (const auto& b : inv_roots_) {
    // S_i q = sum_j (b D)^j q
    Poly acc = out;
    Poly cur = out;
    while (cur.degree() >= 1) {
      cur = scale(differentiate(cur), b);
      acc = acc + cur;
    }
    out = std::move(acc);
  }
  return scale(out, inv_a0_);
}

Poly right_inverse_S(const DiffOperator& T, const Poly& p) {
  const std::size_t m = p.is_zero() ? 0 : static_cast<std::size_t>(p.degree());
  return RightInverse(T, m)(p);
}

Poly right_inverse_S_power(const DiffOperator& T, std::size_t n, const Poly& p) {
  const std::size_t m = p.is_zero() ? 0 : static_cast<std::size_t>(p.degree());
  RightInverse S(T, m);
  Poly out = p;
  for (std::size_t i = 0; i < n; ++i) out = S(out);
  return out;
}

Poly right_inverse_Sn_zero_case(const DiffOperator& T, std::size_t n, const Poly& p) {
  if (T.kind() != SymbolKind::TaylorPoly || T.J() == 0) {
    throw PreconditionError("right_inverse_Sn_zero_case requires a polynomial symbol with J >= 1");
  }
  const auto& a = T.symbol_coeffs();
  std::vector<Complex> psi(a.begin() + static_cast<long>(T.J()), a.end());
  DiffOperator psi_op = DiffOperator::taylor(std::move(psi));
  return antiderivative(right_inverse_S_power(psi_op, n, p), T.J() * n);
}

Real growth_bound(const DiffOperator& T, const Poly& p, const Real& R, std::size_t n) {
  if (p.is_zero()) return Real();
  const long m = p.degree();
  Real mu = max_coeff_abs(p);
  Real nb = T.type_beta() * Real(static_cast<long>(n)) + R;
  return mu * Real(m + 1) * pow(T.type_alpha(), static_cast<long>(n)) * pow(nb, m);
}

GrowthConstants coefficient_bound_C(const DiffOperator& T, std::size_t m, const Real& mu, const Real& R_ref) {
  TruncatedSymbol ts = truncated_symbol(T, m);
  GrowthConstants g;
  g.m = m;
  g.mu = max(Real(1L), mu);
  g.r_inv = Real(1L);
  for (const auto& r : ts.roots) g.r_inv = max(g.r_inv, Real(1L) / abs(r));
  const long ml = static_cast<long>(m);
  const Real e = euler_e();
  Real em = pow(e, ml);
  Real rm = g.r_inv * Real(ml);
  Real term = factorial(m + 1) * (ml == 0 ? Real(1L) : pow(rm, ml)) * g.mu;
  Real mx = max(max(Real(1L), Real(1L) / abs(ts.a0)), max(term, em));
  g.gamma = ldexp(mx, 1);
  g.C = pow(g.gamma, 3L);
  g.R_ref = R_ref;
  g.kappa = Real(ml + 1) * pow(T.type_beta() + R_ref, ml) * g.C * T.type_alpha() * em;
  return g;
}

GrowthConstants coefficient_bound_C(const DiffOperator& T, const Poly& p, const Real& R_ref) {
  const std::size_t m = p.is_zero() ? 0 : static_cast<std::size_t>(p.degree());
  return coefficient_bound_C(T, m, max_coeff_abs(p), R_ref);
}

}  // namespace hyperfactor
