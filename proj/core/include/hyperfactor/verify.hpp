#pragma once

#include <string>
#include <vector>

#include "hyperfactor/driver.hpp"

namespace hyperfactor {

struct StageCheck {
  std::size_t k = 0;
  std::size_t n = 0;
  std::vector<Real> residual_recorded;
  std::vector<Real> residual_recomputed;
  std::vector<Real> continuity_recorded;
  std::vector<Real> continuity_recomputed;
  Real prefix_recorded;
  Real prefix_recomputed;
  Real prefix_budget;
  /// ||T_i^{n_k} f_K - p_k||_k per active operator, and the bound implied
  /// by the certified stage inequalities.
  std::vector<Real> telescoping;
  Real telescoping_bound;
  std::vector<std::string> flags;
};

struct VerifyReport {
  std::vector<StageCheck> stages;
  /// Relative coefficient gap between the full factor product and the
  /// stage-by-stage product.
  Real fidelity;
  std::vector<std::string> flags;  // report-level problems

  bool ok() const;
  std::size_t flag_count() const;
};

/// Recomputes every stage claim from the factor list alone, at the working
/// precision. A recomputed value above 2x the recorded one (plus 2^{-P/2})
/// is flagged, as is any certified inequality that fails on recomputation.
VerifyReport verify_certificate(const std::vector<DiffOperator>& operators, const FactorList& factors,
                                const std::vector<StageRecord>& records);

}  // namespace hyperfactor
