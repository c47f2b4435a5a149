#pragma once

#include <cstddef>
#include <vector>

#include "hyperfactor/polynomial.hpp"

namespace hyperfactor {

/// Two-sided estimate of max_{|z|<=R} |p(z)|.
struct DiskNormEstimate {
  Real radius;
  Real lower;  // max of |p| over the sampled circle points
  Real upper;  // sum |c_i| R^i, rounded up
  std::size_t samples = 0;
};

/// Default sample count: max(4 deg + 64, 256).
std::size_t default_samples(const Poly& p);

DiskNormEstimate disk_norm(const Poly& p, const Real& R, std::size_t samples);
DiskNormEstimate disk_norm(const Poly& p, const Real& R);
/// Only the rigorous upper bound sum |c_i| R^i (rounded up).
Real disk_norm_upper(const Poly& p, const Real& R);

/// max_i |c_i|.
Real max_coeff_abs(const Poly& p);
/// max_i |a_i - b_i| / max(max|a|, max|b|); zero when both are zero.
Real relative_coeff_error(const Poly& a, const Poly& b);
/// max_i |a_i - b_i|.
Real max_coeff_diff(const Poly& a, const Poly& b);

/// Drops top coefficients with |c| <= rel_tol * max|c|.
Poly trimmed(const Poly& p, const Real& rel_tol);

/// lead * prod (z - roots_i).
Poly from_roots(const std::vector<Complex>& roots, const Complex& lead = Complex(1L));
/// prod (1 - z / zeros_i).
Poly from_unit_factors(const std::vector<Complex>& zeros);

/// Rounds every coefficient of an exact polynomial to the working precision.
Poly to_poly(const QPoly& p);

}  // namespace hyperfactor
