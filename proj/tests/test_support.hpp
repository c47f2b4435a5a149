#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hyperfactor/diff_operator.hpp"
#include "hyperfactor/poly.hpp"

namespace hftest {

using hyperfactor::Complex;
using hyperfactor::Poly;
using hyperfactor::Real;

inline std::mt19937_64& rng(std::uint64_t seed = 0) {
  thread_local std::mt19937_64 g(0x5eedULL);
  if (seed) g.seed(seed);
  return g;
}

// Uniform in the unit box [-1, 1]^2.
inline Complex unit_box() {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return Complex(u(rng()), u(rng()));
}

inline std::size_t uniform_int(std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng());
}

// Degree exactly d, unit-box coefficients.
inline Poly random_poly(std::size_t d) {
  std::vector<Complex> c(d + 1);
  for (auto& x : c) x = unit_box();
  while (c.back().is_zero()) c.back() = unit_box();
  return Poly(std::move(c));
}

// Taylor operator of degree <= d with a_0 != 0 and some a_j != 0, j >= 1.
inline hyperfactor::DiffOperator random_taylor_j0(std::size_t d) {
  std::vector<Complex> c(d + 1);
  for (auto& x : c) x = unit_box();
  while (c[0].is_zero()) c[0] = unit_box();
  while (c[d].is_zero()) c[d] = unit_box();
  return hyperfactor::DiffOperator::taylor(std::move(c));
}

inline double log2_of(const Real& x) {
  if (x.is_zero()) return -1e300;
  return hyperfactor::log2(x).to_double();
}

}  // namespace hftest
