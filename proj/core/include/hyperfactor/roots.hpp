#pragma once

#include <vector>

#include "hyperfactor/poly.hpp"

namespace hyperfactor {

struct Root {
  Complex value;
  /// |p(z)| / sum |c_i| |z|^i at the returned z.
  Real residual;
};

struct RootOptions {
  int max_sweeps = 200;
};

/// All deg(p) zeros of a nonconstant polynomial, by Aberth-Ehrlich
/// iteration: a long-double pass from Newton-polygon starting points, then
/// refinement at the working precision.
///
/// Throws ConvergenceError when the sweep budget runs out; callers raise the
/// precision and retry.
std::vector<Root> roots(const Poly& p, const RootOptions& opts = {});

/// log2 bounds on the smallest zero modulus of p, p(0) != 0: the lower one
/// solves |c_0| = sum_{i>=1} |c_i| rho^i, the upper one is
/// min_k (C(d, k) |c_0| / |c_k|)^{1/k}. Computed in double-precision logs.
struct ModulusBounds {
  double log2_lower = 0.0;
  double log2_upper = 0.0;
};
ModulusBounds min_modulus_bounds(const Poly& p);

/// True when Newton from `starts` points on the circle of the lower modulus
/// bound reaches a z with |z| + deg(p) |p(z) / p'(z)| < r, which places a
/// zero of p in |z| < r. False means no certificate was found.
bool certify_zero_within(const Poly& p, double r, int starts = 16, int steps = 40);

/// Convenience: values only.
std::vector<Complex> root_values(const std::vector<Root>& roots);

}  // namespace hyperfactor
