#pragma once

#include <string>
#include <vector>

#include "hyperfactor/diff_operator.hpp"
#include "hyperfactor/ordering.hpp"

namespace hyperfactor {

struct ConstructionConfig {
  double exp_outer = 1.2;        // inner truncation floor(n^1.2)
  double exp_zero_radius = 0.7;  // zeros outside |z| = n^0.7
  double exp_degree_cap = 1.3;   // deg q_n < n^1.3
  /// Relative radius for spreading clustered zeros; 0 means 2^{-P/4}.
  double perturbation_scale = 0.0;
  /// Circle samples for lower disk-norm estimates; 0 means the default rule.
  std::size_t norm_samples = 0;

  void validate() const;
};

/// floor(n^e), exact for e = 1.2 and e = 1.3.
std::size_t floor_pow(std::size_t n, double e);
/// n^e at the working precision.
Real real_pow(std::size_t n, double e);

struct StageDiagnostics {
  Real q_norm;        // ||q_n||_{n^0.7}, coefficient upper bound
  Real q_linear;      // |q_{n,1}|
  Real min_zero;
  Real max_zero;
  Real prefix_sum_max;
  Real reconstruction_error;  // relative, zeros vs q_n + 1
  Real division_error;        // relative, f q + r vs dividend
  long deg_q = 0;
  bool degree_in_window = false;
  bool perturbed = false;
  bool ordering_ok = false;
  bool ordering_preconditions = false;
  std::string ordering_method;
};

struct StageWork {
  std::size_t n = 0;
  bool zero_case = false;
  Complex r;
  Poly dividend;  // h_n - f, or S_n p when phi(0) = 0
  Poly q;         // recentered: q(0) == 0 exactly
  Complex q0;     // constant removed by recentering
  Poly rem;
  std::vector<Complex> zeros_ordered;
  StageDiagnostics diag;
};

/// Exponential rate r for h_n. Polynomial symbols: the zero of phi of least modulus
/// (ties broken by least principal argument). Translations: the first of
/// +-2, +-4, ... with |r| > 1 and |e^{-ra}| > max{|lambda r a e| kappa, e^3}.
Complex choose_r(const DiffOperator& T, const GrowthConstants& gc);

/// h_n = S^n p + (f - S^n p) E_{n-m-1}(-r z) E_{floor(n^1.2)}(r z).
Poly build_h_n(const Poly& f, const Poly& p, const Complex& r, std::size_t n, const DiffOperator& T,
               const ConstructionConfig& cfg = {});

/// Division and recentering only (no zeros).
StageWork build_quotient(const DiffOperator& T, const Poly& f, const Poly& p, std::size_t n, const Complex& r,
                         const ConstructionConfig& cfg);

/// Zeros of q + 1, perturbation of clusters, ordering with t = n^{-0.7}.
/// Replaces q by prod(1 - z/a) - 1 when zeros were perturbed.
void extract_zeros(StageWork& work, const ConstructionConfig& cfg);

/// Backward error max |f q_raw + r - dividend| / (max|f| max|q_raw| +
/// max|r| + max|dividend|), q_raw = q + q0.
Real division_identity_error(const StageWork& work, const Poly& f);

/// Full stage construction. kappa for translations uses R_ref.
StageWork build_q_n(const DiffOperator& T, const Poly& f, const Poly& p, std::size_t n,
                    const ConstructionConfig& cfg = {}, const Real& R_ref = Real(1L));

/// Growth constants used for choose_r: m = deg f, mu over f and p.
GrowthConstants stage_constants(const DiffOperator& T, const Poly& f, const Poly& p, const Real& R_ref);

/// Spreads clusters (pairwise distance below 2^{-P/4} max modulus) on a
/// circle of radius scale*|centroid| about the centroid, angles from 0.
std::vector<Complex> perturb_repeated_zeros(const std::vector<Complex>& zeros, const Real& scale);

struct PrefixProductResult {
  bool ok = true;
  Real max_dev;
  std::vector<Real> deviations;
};

/// ||1 - prod_{j<=J}(1 - z/a_j)||_R (coefficient upper bound) for every prefix.
/// Zeros must lie outside the closed disk unless `require_outside` is false.
PrefixProductResult prefix_product_check(const std::vector<Complex>& zeros_ordered, const Real& R, const Real& eps,
                                         bool require_outside = true);

struct TailBoundResult {
  bool hypothesis_ok = false;
  std::string violation;
  Real bound;           // e^M / M^{0.5 sigma M}
  Real measured_upper;  // ||1 - E_M(-rz) E_N(rz)||_R upper
};

TailBoundResult taylor_tail_bound(std::size_t M, std::size_t N, const Complex& r, const Real& R, const Real& sigma);

/// E_M(-r z) E_N(r z), in any coefficient ring.
template <class T>
Polynomial<T> double_taylor_product(std::size_t M, std::size_t N, const T& r) {
  return truncated_exp<T>(M, -r) * truncated_exp<T>(N, r);
}

}  // namespace hyperfactor
