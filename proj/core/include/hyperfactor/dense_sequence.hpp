#pragma once

#include <cstddef>
#include <vector>

#include "hyperfactor/diff_operator.hpp"

namespace hyperfactor {

/// g_0 = 0, g_1, g_2, ...: every Gaussian rational x + iy exactly once.
///
/// Real rationals are indexed 0, 1, -1, 2, -2, 1/2, -1/2, 3, -3, 3/2, ...
/// (by height max(|a|, b) in lowest terms, then denominator, then |a|, then
/// sign). The pair x + iy with real indices (ix, iy) is ranked by
/// (max(ix, iy), iy, ix), so g_1 = 1, g_2 = i, g_3 = 1 + i, g_4 = -1, ...
QComplex gaussian_rational(std::size_t index);

/// Block s lists every nonzero polynomial of degree < s whose coefficients
/// are among g_0 .. g_{s-1}, counting in base s with c_0 least significant.
/// Blocks s = 2, 3, ... are concatenated; element i is returned.
QPoly enumerated_polynomial(std::size_t index);

/// p_1 = a_J, p_2 = 1, p_k = enumerated_polynomial(k - 3) for k >= 3.
/// deg p_k <= k - 1 always.
Poly dense_sequence(const DiffOperator& T, std::size_t k);

}  // namespace hyperfactor
