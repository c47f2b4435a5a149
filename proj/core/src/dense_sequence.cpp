#include "hyperfactor/dense_sequence.hpp"

#include <numeric>

#include "hyperfactor/error.hpp"

namespace hyperfactor {

namespace {

// Real rationals in enumeration order, grown on demand.
const mpq_class& real_rational(std::size_t index) {
  thread_local std::vector<mpq_class> cache{mpq_class(0)};
  thread_local unsigned long height = 0;
  while (cache.size() <= index) {
    ++height;
    const unsigned long h = height;
    auto push = [&](unsigned long a, unsigned long b) {
      mpq_class q(static_cast<long>(a), b);
      q.canonicalize();
      cache.push_back(q);
      cache.push_back(-q);
    };
    for (unsigned long b = 1; b < h; ++b) {
      if (std::gcd(h, b) == 1) push(h, b);
    }
    for (unsigned long a = 1; a <= h; ++a) {
      if (std::gcd(a, h) == 1 && (a < h || h == 1)) push(a, h);
    }
  }
  return cache[index];
}

}  // namespace

QComplex gaussian_rational(std::size_t index) {
  // Pairs with max(ix, iy) = M come in the order (M, 0..M-1), then (0..M, M).
  std::size_t M = 0;
  while ((M + 1) * (M + 1) <= index) ++M;
  std::size_t off = index - M * M;
  std::size_t ix, iy;
  if (off < M) {
    ix = M;
    iy = off;
  } else {
    ix = off - M;
    iy = M;
  }
  return {real_rational(ix), real_rational(iy)};
}

QPoly enumerated_polynomial(std::size_t index) {
  std::size_t s = 2;
  std::size_t idx = index;
  for (;;) {
    std::size_t block = 1;
    for (std::size_t i = 0; i < s; ++i) block *= s;
    block -= 1;
    if (idx < block) break;
    idx -= block;
    ++s;
    if (s > 12) throw PreconditionError("enumerated_polynomial: index out of supported range");
  }
  std::size_t t = idx + 1;
  std::vector<QComplex> c(s);
  for (std::size_t i = 0; i < s; ++i) {
    c[i] = gaussian_rational(t % s);
    t /= s;
  }
  return QPoly(std::move(c));
}

Poly dense_sequence(const DiffOperator& T, std::size_t k) {
  if (k == 0) throw PreconditionError("dense_sequence: k starts at 1");
  if (k == 1) return Poly::constant(T.coeff(T.J()));
  if (k == 2) return Poly::constant(Complex(1L));
  return to_poly(enumerated_polynomial(k - 3));
}

}  // namespace hyperfactor
