#include <gtest/gtest.h>

#include "hyperfactor/diff_operator.hpp"
#include "test_support.hpp"

using namespace hyperfactor;
using hftest::random_poly;

namespace {

Poly P(std::initializer_list<Complex> c) { return Poly(c); }
DiffOperator op(std::initializer_list<Complex> c) { return DiffOperator::taylor(std::vector<Complex>(c)); }
Real tol(long bits_below) { return ldexp(Real(1L), -(static_cast<long>(working_precision()) - bits_below)); }

const DiffOperator kD = op({0, 1});

}  // namespace

TEST(DiffOperator, Classification) {
  EXPECT_EQ(kD.J(), 1u);
  EXPECT_EQ(op({2, 1}).J(), 0u);
  EXPECT_EQ(op({0, 0, 0, 1}).J(), 3u);
  DiffOperator t = DiffOperator::translation(Complex(1), Complex(1));
  EXPECT_TRUE(t.zero_free());
  EXPECT_FALSE(kD.zero_free());
  EXPECT_TRUE(op({3}).is_scalar());
  EXPECT_THROW(require_nonscalar(op({3})), PreconditionError);
  EXPECT_TRUE(DiffOperator::translation(Complex(1), Complex()).is_scalar());
  EXPECT_THROW(DiffOperator::translation(Complex(), Complex(1)), PreconditionError);
}

TEST(DiffOperator, TypeConstantsDominateCoefficients) {
  for (int t = 0; t < 100; ++t) {
    DiffOperator T = hftest::random_taylor_j0(hftest::uniform_int(1, 6));
    for (std::size_t j = 0; j < T.symbol_coeffs().size(); ++j) {
      Real bound = T.type_alpha() * pow(T.type_beta(), static_cast<long>(j)) / factorial(j);
      EXPECT_LE(abs(T.coeff(j)), bound);
    }
    EXPECT_GT(T.type_alpha(), Real(1L));
    EXPECT_GT(T.type_beta(), Real(1L));
  }
  DiffOperator tr = DiffOperator::translation(Complex(3), Complex(0.5, 0.5));
  EXPECT_EQ(tr.type_alpha(), Real(6L));
  EXPECT_EQ(tr.type_beta(), Real(2L));
}

TEST(Apply, Examples) {
  EXPECT_EQ(apply(kD, P({0, 0, 1})), P({0, 2}));
  DiffOperator e = DiffOperator::translation(Complex(1), Complex(1));
  EXPECT_EQ(apply(e, P({0, 0, 1})), P({1, 2, 1}));
  EXPECT_EQ(apply(op({2, 1}), P({0, 1})), P({1, 2}));
}

TEST(ApplyN, Examples) {
  EXPECT_EQ(apply_n(kD, 3, P({0, 0, 0, 1})), P({6}));
  EXPECT_TRUE(apply_n(kD, 4, P({0, 0, 0, 1})).is_zero());
  DiffOperator e = DiffOperator::translation(Complex(1), Complex(1));
  EXPECT_EQ(apply_n(e, 5, P({0, 1})), P({5, 1}));
  Poly p = random_poly(5);
  EXPECT_EQ(apply_n(op({2, 1}), 0, p), p);
}

TEST(ApplyN, MatchesRepeatedApply) {
  for (int t = 0; t < 30; ++t) {
    DiffOperator T = hftest::random_taylor_j0(hftest::uniform_int(1, 4));
    Poly p = random_poly(hftest::uniform_int(0, 8));
    std::size_t n = hftest::uniform_int(1, 12);
    Poly it = p;
    for (std::size_t i = 0; i < n; ++i) it = apply(T, it);
    Poly direct = apply_n(T, n, p);
    Real scale = max(max_coeff_abs(it), Real(1L));
    EXPECT_LE(max_coeff_diff(direct, it), tol(24) * scale) << t;
  }
}

TEST(Apply, TranslationConsistency) {
  for (int t = 0; t < 40; ++t) {
    DiffOperator T = DiffOperator::translation(hftest::unit_box(), hftest::unit_box());
    Poly p = random_poly(hftest::uniform_int(0, 12));
    EXPECT_LE(relative_coeff_error(apply(T, p), apply_via_series(T, p)), tol(24));
  }
}

TEST(TruncatedSymbol, Examples) {
  TruncatedSymbol a = truncated_symbol(op({1, -1}), 1);
  EXPECT_EQ(a.a0, Complex(1));
  ASSERT_EQ(a.roots.size(), 1u);
  EXPECT_LE(abs(a.roots[0] - Complex(1)), tol(32));

  TruncatedSymbol b = truncated_symbol(op({2}), 3);
  EXPECT_EQ(b.a0, Complex(2));
  EXPECT_TRUE(b.roots.empty());

  // 1 + z + z^2/2 = 0  <=>  z = -1 +- i
  TruncatedSymbol c = truncated_symbol(DiffOperator::translation(Complex(1), Complex(1)), 2);
  ASSERT_EQ(c.roots.size(), 2u);
  for (const Complex& want : {Complex(-1.0, 1.0), Complex(-1.0, -1.0)}) {
    Real best = min(abs(c.roots[0] - want), abs(c.roots[1] - want));
    EXPECT_LE(best, tol(32));
  }
  EXPECT_THROW(truncated_symbol(kD, 2), PreconditionError);
}

TEST(RightInverse, Examples) {
  EXPECT_LE(max_coeff_diff(right_inverse_S(op({1, -1}), P({0, 1})), P({1, 1})), tol(32));
  EXPECT_LE(max_coeff_diff(right_inverse_S(op({2}), P({0, 0, 1})), P({0, 0, 0.5})), tol(32));
  EXPECT_THROW(right_inverse_S(kD, P({1})), PreconditionError);
}

TEST(RightInverse, IdentityAndDegree) {
  for (int t = 0; t < 200; ++t) {
    DiffOperator T = hftest::random_taylor_j0(hftest::uniform_int(1, 4));
    Poly p = random_poly(hftest::uniform_int(0, 6));
    Poly sp = right_inverse_S(T, p);
    EXPECT_EQ(sp.degree(), p.degree());
    Real scale = max(max_coeff_abs(p), Real(1L));
    EXPECT_LE(max_coeff_diff(apply(T, sp), p), tol(32) * scale) << t;
  }
}

TEST(RightInverse, ZeroCase) {
  Poly a = right_inverse_Sn_zero_case(kD, 4, P({1}));
  EXPECT_LE(max_coeff_diff(a, Poly::monomial(Complex(1) / Complex(24), 4)), tol(32));
  EXPECT_LE(max_coeff_diff(apply_n(kD, 4, a), P({1})), tol(32));
  Poly b = right_inverse_Sn_zero_case(op({0, 0, 1}), 1, P({0, 1}));
  EXPECT_LE(max_coeff_diff(b, Poly::monomial(Complex(1) / Complex(6), 3)), tol(32));

  DiffOperator T = op({0, 1, -1});  // D (I - D)
  for (int t = 0; t < 30; ++t) {
    Poly p = random_poly(hftest::uniform_int(0, 4));
    std::size_t n = hftest::uniform_int(1, 5);
    Poly back = apply_n(T, n, right_inverse_Sn_zero_case(T, n, p));
    EXPECT_LE(max_coeff_diff(back, p), tol(32) * max(max_coeff_abs(p), Real(1L))) << t;
  }
  EXPECT_THROW(right_inverse_Sn_zero_case(op({1, 1}), 2, P({1})), PreconditionError);
}

TEST(GrowthBound, Examples) {
  // alpha = beta = 2 for D; m = 1, mu = 1: 1 * 2 * 2 * (2 + 1) = 12.
  EXPECT_EQ(growth_bound(kD, P({0, 1}), Real(1L), 1), Real(12L));
  DiffOperator T = op({0.5, 1});
  Poly c = P({Complex(0.25, 0.0)});
  for (std::size_t n = 1; n < 8; ++n) {
    Real bound = growth_bound(T, c, Real(3L), n);
    EXPECT_EQ(bound, Real(0.25) * pow(T.type_alpha(), static_cast<long>(n)));
    EXPECT_LE(disk_norm_upper(apply_n(T, n, c), Real(3L)), bound);
  }
}

TEST(GrowthBound, DominatesMeasuredNorms) {
  for (int t = 0; t < 50; ++t) {
    DiffOperator T = (t % 5 == 4) ? DiffOperator::translation(hftest::unit_box(), hftest::unit_box())
                                  : hftest::random_taylor_j0(hftest::uniform_int(1, 4));
    Poly p = random_poly(hftest::uniform_int(0, 6));
    std::size_t n = hftest::uniform_int(1, 15);
    Real R(t % 2 ? 5L : 1L);
    EXPECT_LE(disk_norm_upper(apply_n(T, n, p), R), growth_bound(T, p, R, n)) << t;
  }
}

TEST(CoefficientBound, PlugIn) {
  GrowthConstants g = coefficient_bound_C(op({2}), P({0, 1}));
  Real gamma = ldexp(euler_e(), 1);
  EXPECT_LE(abs(g.gamma - gamma), tol(8) * gamma);
  EXPECT_LE(abs(g.C - pow(gamma, 3L)), tol(8) * g.C);
  EXPECT_GT(g.C, Real(1L));
  EXPECT_GT(g.kappa, Real());

  // m = 0: gamma = 2 max{1, 1/|a_0|}, and |c_{n,0}| = |a_0|^{-n} |p_0| < C^n.
  DiffOperator T = op({0.25, 1});
  GrowthConstants h = coefficient_bound_C(T, P({1}));
  EXPECT_EQ(h.gamma, Real(8L));
  Poly s = P({1});
  for (std::size_t n = 1; n <= 10; ++n) {
    s = right_inverse_S(T, s);
    EXPECT_LT(abs(s[0]), pow(h.C, static_cast<long>(n)));
  }
}

TEST(CoefficientBound, SnCoefficientsBelowCn) {
  DiffOperator T = op({1, -1});
  Poly p = P({1, 0, 0, 1});
  GrowthConstants g = coefficient_bound_C(T, p);
  Poly s = p;
  for (std::size_t n = 1; n <= 25; ++n) {
    s = right_inverse_S(T, s);
    Real cn = pow(g.C, static_cast<long>(n));
    for (const auto& c : s.coeffs()) EXPECT_LT(abs(c), cn) << n;
  }
}

// (I - D/r)^n (h E_K(rz)) -> 0 as K grows, for deg h < n.
TEST(Annihilation, TruncatedExponentialSurrogate) {
  for (std::size_t n = 1; n <= 8; ++n) {
    Complex r(0.75, 0.5);
    DiffOperator T = DiffOperator::taylor({Complex(1), -(Complex(1) / r)});
    Poly h = random_poly(n - 1);
    Poly in = h * truncated_exp(4 * n + 24, r);
    Poly out = apply_n(T, n, in);
    EXPECT_LE(disk_norm_upper(out, Real(1L)), Real(1e-6) * disk_norm_upper(in, Real(1L))) << n;
  }
}
