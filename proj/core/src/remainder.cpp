#include "hyperfactor/remainder.hpp"

#include <algorithm>
#include <complex>

#include "hyperfactor/error.hpp"

namespace hyperfactor {

namespace {

std::vector<Complex> vandermonde(const std::vector<Complex>& zeros) {
  const std::size_t m = zeros.size();
  std::vector<Complex> V(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    Complex pw(1L);
    for (std::size_t j = 0; j < m; ++j) {
      V[i * m + j] = pw;
      pw *= zeros[i];
    }
  }
  return V;
}

// Gauss-Jordan on [A | B] with partial pivoting; B has `cols` columns.
void gauss_jordan(std::vector<Complex>& A, std::vector<Complex>& B, std::size_t m, std::size_t cols) {
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    Real best = abs(A[c * m + c]);
    for (std::size_t r = c + 1; r < m; ++r) {
      Real v = abs(A[r * m + c]);
      if (v > best) {
        best = std::move(v);
        piv = r;
      }
    }
    if (best.is_zero()) throw PreconditionError("Vandermonde matrix is singular");
    if (piv != c) {
      for (std::size_t j = 0; j < m; ++j) std::swap(A[c * m + j], A[piv * m + j]);
      for (std::size_t j = 0; j < cols; ++j) std::swap(B[c * cols + j], B[piv * cols + j]);
    }
    const Complex inv = Complex(1L) / A[c * m + c];
    for (std::size_t j = 0; j < m; ++j) A[c * m + j] *= inv;
    for (std::size_t j = 0; j < cols; ++j) B[c * cols + j] *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c || A[r * m + c].is_zero()) continue;
      const Complex f = A[r * m + c];
      for (std::size_t j = 0; j < m; ++j) A[r * m + j] -= f * A[c * m + j];
      for (std::size_t j = 0; j < cols; ++j) B[r * cols + j] -= f * B[c * cols + j];
    }
  }
}

}  // namespace

bool zeros_distinct(const std::vector<Complex>& zeros) {
  Real mx;
  std::vector<std::complex<long double>> zl;
  zl.reserve(zeros.size());
  for (const auto& z : zeros) {
    mx = max(mx, abs(z));
    zl.push_back(z.to_complex_long_double());
  }
  Real thresh = ldexp(mx, -static_cast<long>(working_precision() / 4));
  // Long-double prefilter; only near pairs are compared in full precision.
  const long double pre = std::max(thresh.to_long_double() * 4.0L, mx.to_long_double() * 1e-15L);
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    for (std::size_t j = i + 1; j < zeros.size(); ++j) {
      if (std::abs(zl[i] - zl[j]) > pre) continue;
      if (!(abs(zeros[i] - zeros[j]) > thresh)) return false;
    }
  }
  return true;
}

RemainderBound remainder_bound_constant(const std::vector<Complex>& zeros) {
  if (zeros.empty()) throw PreconditionError("remainder_bound_constant: no zeros");
  if (!zeros_distinct(zeros)) throw PreconditionError("remainder_bound_constant: zeros are not distinct");
  const std::size_t m = zeros.size();
  std::vector<Complex> A = vandermonde(zeros);
  std::vector<Complex> B(m * m);
  for (std::size_t i = 0; i < m; ++i) B[i * m + i] = Complex(1L);
  gauss_jordan(A, B, m, m);
  RemainderBound rb;
  rb.zeros = zeros;
  rb.m = m;
  rb.inverse = std::move(B);
  for (std::size_t i = 0; i < m; ++i) {
    Real row;
    for (std::size_t j = 0; j < m; ++j) row += abs(rb.inverse[i * m + j]);
    rb.omega = max(rb.omega, row);
  }
  return rb;
}

Poly remainder_via_interpolation(const Poly& g, const RemainderBound& bound) {
  const std::size_t m = bound.m;
  std::vector<Complex> vals(m);
  for (std::size_t i = 0; i < m; ++i) vals[i] = eval(g, bound.zeros[i]);
  std::vector<Complex> r(m);
  MulAddScratch scratch;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) mul_add(r[i], bound.inverse[i * m + j], vals[j], scratch);
  }
  return Poly(std::move(r));
}

std::vector<Complex> vandermonde_solve(const std::vector<Complex>& zeros, const std::vector<Complex>& rhs) {
  const std::size_t m = zeros.size();
  if (rhs.size() != m) throw PreconditionError("vandermonde_solve: size mismatch");
  std::vector<Complex> A = vandermonde(zeros);
  std::vector<Complex> B = rhs;
  gauss_jordan(A, B, m, 1);
  return B;
}

}  // namespace hyperfactor
