#pragma once

#include <string>
#include <vector>

#include "hyperfactor/complex.hpp"

namespace hyperfactor {

struct OrderingResult {
  std::vector<Complex> ordered;
  /// max over prefixes of |sum_{j<=J} 1/a_j|.
  Real prefix_max;
  /// prefix_max <= sqrt(5) t.
  bool ok = false;
  /// "exhaustive", "greedy", "backtrack" or "halfplane".
  std::string method;
  /// Precondition report: max |1/a| <= t and |sum 1/a| <= t.
  bool preconditions_hold = false;
};

struct OrderingOptions {
  std::size_t exhaustive_cutoff = 8;
  std::size_t node_budget = 100000;
};

/// Orders zeros so every prefix sum of reciprocals has modulus <= sqrt(5) t.
OrderingResult order_zeros(const std::vector<Complex>& zeros, const Real& t, const OrderingOptions& opts = {});

/// max_J |sum_{j<=J} 1/a_j| at the working precision.
Real prefix_reciprocal_max(const std::vector<Complex>& zeros);

/// Smallest achievable prefix maximum by trying all permutations (<= 10 elements).
Real exhaustive_best_prefix(const std::vector<Complex>& zeros);

}  // namespace hyperfactor
