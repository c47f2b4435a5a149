#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "hyperfactor/construction.hpp"

namespace hyperfactor {

struct RunConfig {
  std::size_t stages = 6;   // K
  std::size_t n_max = 300;  // per stage
  mpfr_prec_t precision_bits = 256;
  mpfr_prec_t precision_ceiling = 1024;
  /// Circle samples for the reported lower bounds; 0 means the default rule.
  std::size_t samples = 0;
  bool allow_best_effort = false;
  /// Unit-step candidates after n_{k-1} before switching to x1.5 steps.
  std::size_t linear_window = 32;
  ConstructionConfig construction;

  void validate() const;
};

struct CandidateTrace;
/// Called after every candidate evaluation (progress reporting).
using CandidateCallback = std::function<void(std::size_t k, const CandidateTrace&)>;

/// One evaluated (n, construction operator) pair of a stage search.
struct CandidateTrace {
  std::size_t n = 0;
  std::size_t op = 0;
  mpfr_prec_t precision = 0;
  /// Residual upper bound per operator; empty if never measured.
  std::vector<Real> residuals;
  std::vector<std::string> failed;
};

struct StageRecord {
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t construction_op = 0;
  long deg_q = 0;
  /// ||T_i^n f_k - p_k||_k upper bound (rounding allowance included), per
  /// active operator; residual() is their maximum.
  std::vector<Real> residuals;
  std::vector<Real> residuals_lower;
  /// ||T_i^{n_j}(f_k - f_{k-1})||_k for j < k; operator i <= j, row-major
  /// in (j, i).
  std::vector<Real> continuity;
  Real threshold;  // 2^{-k} (stage 1: 1 plus a rounding margin)
  Real q_norm;     // ||q_k||_k
  Real q_linear;
  Real min_zero;
  Real max_zero;
  Real prefix_product_max;
  Real prefix_budget;
  bool perturbed = false;
  bool certified = false;
  bool best_effort = false;
  mpfr_prec_t precision = 0;
  std::vector<std::string> failed;
  std::vector<CandidateTrace> trace;

  Real residual() const;
};

/// Per operator: whether the best residual over construction operators is
/// strictly decreasing in n across the measured candidates (needs two).
std::vector<bool> residual_trend(const StageRecord& rec);

struct FactorList {
  std::vector<Complex> factors;
  /// d_0 = 0, d_j = d_{j-1} + (zeros contributed by stage j).
  std::vector<std::size_t> stage_offsets{0};
};

enum class RunStatus { Certified, BestEffort, PrecisionExhausted };

struct RunResult {
  std::vector<DiffOperator> operators;
  RunConfig config;
  std::vector<StageRecord> records;
  FactorList factors;
  RunStatus status = RunStatus::Certified;
  std::string message;
  /// Working precision at the end of each stage.
  std::vector<mpfr_prec_t> precision_schedule;
  /// f_K at the final precision.
  Poly f;
};

/// The stage-1 quotient: b z with b = 1/(|a_0| + |a_1|) when phi(0) != 0,
/// z^J / J! otherwise.
Poly initial_q1(const DiffOperator& T);

/// Stage threshold: 2^{-k}; stage 1 allows 1 (plus a rounding margin) when
/// phi(0) != 0 and 2^{-1} otherwise.
Real stage_threshold(const DiffOperator& T, std::size_t k);

/// Candidate iterate counts in (n_prev, n_max], ascending.
std::vector<std::size_t> candidate_counts(std::size_t n_prev, std::size_t n_max, std::size_t linear_window);

/// Operators whose property (b) is checked at stage k (multi mode: i <= k).
std::size_t active_operators(std::size_t count, std::size_t k);

/// ||T^n f - p||_R upper bound plus a rounding allowance for computing
/// T^n f at the working precision.
struct ResidualMeasure {
  Real upper;
  Real lower;
  Real noise;
};
ResidualMeasure measure_residual(const DiffOperator& T, std::size_t n, const Poly& f, const Poly& p, const Real& R,
                                 std::size_t samples = 0);

/// Runs stages 1..K. Operators must be nonscalar; the first one defines p_1.
RunResult run(const std::vector<DiffOperator>& operators, const RunConfig& cfg,
              const CandidateCallback& on_candidate = {});

/// prod over the factor list, one block per stage, at the working precision.
std::vector<Poly> stage_products(const FactorList& factors);

const char* to_string(RunStatus s);

}  // namespace hyperfactor
