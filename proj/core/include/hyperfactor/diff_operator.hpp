#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hyperfactor/poly.hpp"

namespace hyperfactor {

enum class SymbolKind { TaylorPoly, ScaledTranslation };

/// T = phi(D). Either a polynomial symbol a_0 + a_1 z + ... + a_d z^d, or
/// lambda e^{a z} (so T f(z) = lambda f(z + a)).
///
/// Scalar symbols are representable because right inverses of the factor
/// psi(D) in phi = z^J psi may be scalar; `is_scalar()` reports it and the
/// driver rejects scalar operators.
class DiffOperator {
 public:
  static DiffOperator taylor(std::vector<Complex> coeffs);
  static DiffOperator translation(Complex lambda, Complex shift);

  SymbolKind kind() const noexcept { return kind_; }
  bool zero_free() const noexcept { return kind_ == SymbolKind::ScaledTranslation; }
  bool is_scalar() const noexcept;

  /// Polynomial symbol coefficients (TaylorPoly only).
  const std::vector<Complex>& symbol_coeffs() const;
  const Complex& lambda() const;
  const Complex& shift() const;

  /// a_j; zero beyond the support of a polynomial symbol.
  Complex coeff(std::size_t j) const;
  /// Degree of a polynomial symbol; for translations, unbounded (returns -1).
  long symbol_degree() const noexcept;
  /// a_0 + ... + a_m z^m.
  Poly truncated_symbol_poly(std::size_t m) const;

  /// Smallest j with a_j != 0.
  std::size_t J() const noexcept { return J_; }
  const Real& type_alpha() const noexcept { return alpha_; }
  const Real& type_beta() const noexcept { return beta_; }

  std::string describe() const;

 private:
  DiffOperator() = default;
  void compute_type_constants();

  SymbolKind kind_ = SymbolKind::TaylorPoly;
  std::vector<Complex> coeffs_;
  Complex lambda_;
  Complex shift_;
  std::size_t J_ = 0;
  Real alpha_;
  Real beta_;
};

/// Throws PreconditionError naming the violated condition if T is scalar.
void require_nonscalar(const DiffOperator& T);

Poly apply(const DiffOperator& T, const Poly& p);
/// Translation by the D-series truncated at deg p (cross-check path).
Poly apply_via_series(const DiffOperator& T, const Poly& p);
Poly apply_n(const DiffOperator& T, std::size_t n, const Poly& p);
/// sum_j c_j D^j p for a coefficient sequence c.
Poly apply_series(const std::vector<Complex>& c, const Poly& p);
/// Coefficients of phi^n truncated to degree L - 1.
std::vector<Complex> symbol_power(const DiffOperator& T, std::size_t n, std::size_t L);

struct TruncatedSymbol {
  std::size_t degree_cap = 0;
  Complex a0;
  std::vector<Complex> roots;
};

TruncatedSymbol truncated_symbol(const DiffOperator& T, std::size_t m);

/// Right inverse S of T on polynomials of degree <= m:
/// S p = (1/a_0) S_1 ... S_m p with S_i = sum_{j<=m} (D/alpha_i)^j.
class RightInverse {
 public:
  RightInverse(const DiffOperator& T, std::size_t m);
  Poly operator()(const Poly& p) const;
  const TruncatedSymbol& symbol() const noexcept { return ts_; }

 private:
  TruncatedSymbol ts_;
  Complex inv_a0_;
  std::vector<Complex> inv_roots_;
};

Poly right_inverse_S(const DiffOperator& T, const Poly& p);
/// S^n p.
Poly right_inverse_S_power(const DiffOperator& T, std::size_t n, const Poly& p);
/// A^{Jn} (S~^n p) with phi = z^J psi and S~ the right inverse of psi(D).
Poly right_inverse_Sn_zero_case(const DiffOperator& T, std::size_t n, const Poly& p);

/// mu (m+1) alpha^n (n beta + R)^m with mu = max |p_j|.
Real growth_bound(const DiffOperator& T, const Poly& p, const Real& R, std::size_t n);

struct GrowthConstants {
  std::size_t m = 0;
  Real mu;      // max{1, |p_j|}
  Real r_inv;   // max{1, |alpha_i|^{-1}}
  Real gamma;
  Real C;       // gamma^3
  Real kappa;   // (m+1)(beta + R_ref)^m C alpha e^m
  Real R_ref;
};

GrowthConstants coefficient_bound_C(const DiffOperator& T, const Poly& p, const Real& R_ref = Real(1L));
/// Same constants from a degree cap m and coefficient bound mu directly.
GrowthConstants coefficient_bound_C(const DiffOperator& T, std::size_t m, const Real& mu, const Real& R_ref);

}  // namespace hyperfactor
