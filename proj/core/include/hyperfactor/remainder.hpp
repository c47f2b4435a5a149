#pragma once

#include <vector>

#include "hyperfactor/poly.hpp"

namespace hyperfactor {

/// omega = ||V^{-1}||_inf for the Vandermonde matrix V_{ij} = alpha_i^j at
/// the simple zeros of f.
struct RemainderBound {
  Real omega;
  std::vector<Complex> zeros;
  std::size_t m = 0;
  /// Row-major m x m inverse.
  std::vector<Complex> inverse;
};

/// Throws PreconditionError when two zeros are closer than 2^{-P/4} times the
/// largest modulus.
RemainderBound remainder_bound_constant(const std::vector<Complex>& zeros);

/// The unique r with deg r < m and r(alpha_i) = g(alpha_i).
Poly remainder_via_interpolation(const Poly& g, const RemainderBound& bound);

/// Solves V x = rhs by Gaussian elimination with partial pivoting.
std::vector<Complex> vandermonde_solve(const std::vector<Complex>& zeros, const std::vector<Complex>& rhs);

/// True when every pair is separated by more than 2^{-P/4} max|zeros|.
bool zeros_distinct(const std::vector<Complex>& zeros);

}  // namespace hyperfactor
