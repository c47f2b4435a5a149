#include <gtest/gtest.h>

#include "hyperfactor/construction.hpp"
#include "hyperfactor/roots.hpp"
#include "test_support.hpp"

using namespace hyperfactor;

namespace {

Poly P(std::initializer_list<Complex> c) { return Poly(c); }
DiffOperator op(std::initializer_list<Complex> c) { return DiffOperator::taylor(std::vector<Complex>(c)); }
Real tol(long bits_below) { return ldexp(Real(1L), -(static_cast<long>(working_precision()) - bits_below)); }

QComplex q(long num, unsigned long den = 1) { return QComplex(mpq_class(num, den)); }

}  // namespace

TEST(FloorPow, ExactOnPerfectPowers) {
  EXPECT_EQ(floor_pow(5, 1.2), 6u);  // 5^1.2 = 6.898...
  EXPECT_EQ(floor_pow(32, 1.2), 64u);
  EXPECT_EQ(floor_pow(1, 1.3), 1u);
  EXPECT_EQ(floor_pow(100, 0.5), 10u);
}

TEST(ChooseR, Examples) {
  DiffOperator a = op({1, -1});
  EXPECT_LE(abs(choose_r(a, coefficient_bound_C(a, P({1}))) - Complex(1)), tol(32));

  GrowthConstants gc;
  gc.kappa = Real(10L);
  Complex r = choose_r(DiffOperator::translation(Complex(1), Complex(1)), gc);
  EXPECT_EQ(r, Complex(-8));

  DiffOperator b = op({4, 0, -1});
  EXPECT_LE(abs(choose_r(b, coefficient_bound_C(b, P({1}))) - Complex(2)), tol(32));

  EXPECT_THROW(choose_r(op({0, 1}), gc), PreconditionError);
}

TEST(BuildHn, DegreeAndExactExpansion) {
  // T = I - D (r = 1), f = 1 - z/2, p = 1, n = 5: S^5 1 = 1, so
  // h_5 = 1 + (f - 1) E_3(-z) E_6(z).
  DiffOperator T = op({1, -1});
  Poly f = P({1, -0.5});
  Poly h = build_h_n(f, P({1}), Complex(1), 5, T);
  EXPECT_EQ(h.degree(), static_cast<long>(floor_pow(5, 1.2) + 5 - 1));
  QPoly fq({q(1), q(-1, 2)});
  QPoly hq = QPoly({q(1)}) + (fq - QPoly({q(1)})) * double_taylor_product<QComplex>(3, 6, q(1));
  EXPECT_LE(max_coeff_diff(h, to_poly(hq)), tol(16));
}

TEST(BuildHn, EdgeNEqualsMPlusOne) {
  DiffOperator T = op({2, 1});
  Poly f = P({1, -0.25});
  Poly p = P({Complex(0.5, 0.5)});
  Complex r(-2);
  Poly h = build_h_n(f, p, r, 2, T);
  Poly snp = right_inverse_S_power(T, 2, p);
  Poly want = snp + (f - snp) * truncated_exp(floor_pow(2, 1.2), r);
  EXPECT_LE(relative_coeff_error(h, want), tol(16));
}

TEST(BuildQn, ZeroCaseWorkedExample) {
  // T = D, f = 1 - z, p = 1/2, n = 3: S_3 p = z^3/12 = (1 - z) q + r with
  // q = -(z^2 + z + 1)/12, r = 1/12; recentering gives -(z^2 + z)/12.
  StageWork w = build_q_n(op({0, 1}), P({1, -1}), P({0.5}), 3);
  EXPECT_TRUE(w.zero_case);
  Poly want = to_poly(QPoly({q(0), q(-1, 12), q(-1, 12)}));
  EXPECT_LE(max_coeff_diff(w.q, want), tol(16));
  EXPECT_TRUE(w.q[0].is_zero());
  EXPECT_LE(abs(w.q0 - Complex(-1) / Complex(12)), tol(16));
  EXPECT_LE(max_coeff_diff(w.rem, P({Complex(1) / Complex(12)})), tol(16));
}

TEST(BuildQn, ZeroCaseExactness) {
  Poly f = P({1, Complex(-5) / Complex(6), Complex(1) / Complex(6)});  // (1 - z/2)(1 - z/3)
  for (const DiffOperator& T : {op({0, 1}), op({0, 0, 1})}) {
    for (std::size_t n = 3; n <= 12; ++n) {
      Poly p = hftest::random_poly(n % 2);
      StageWork w = build_q_n(T, f, p, n);
      Poly out = apply_n(T, n, add_constant(w.q, Complex(1)) * f);
      Real scale = max(max_coeff_abs(p), Real(1L));
      EXPECT_LE(max_coeff_diff(out, p), tol(48) * scale) << "n=" << n;
    }
  }
}

TEST(BuildQn, StageInvariants) {
  struct Case {
    DiffOperator T;
    Poly f;
    Poly p;
    std::size_t n;
  };
  std::vector<Case> cases{
      {op({0, 1}), P({1, 1}), P({1}), 20},
      {op({2, 1}), P({1, Complex(1) / Complex(3)}), P({1}), 12},
      {op({1, -1}), P({1, -0.5}), P({Complex(0.5, -0.5)}), 9},
  };
  for (const auto& c : cases) {
    StageWork w = build_q_n(c.T, c.f, c.p, c.n);
    EXPECT_TRUE(w.q.is_zero() || w.q[0].is_zero());
    EXPECT_LE(w.diag.division_error, tol(40));
    EXPECT_EQ(w.zeros_ordered.size(), static_cast<std::size_t>(std::max(0L, w.q.degree())));
    if (!w.zeros_ordered.empty()) {
      Poly back = from_unit_factors(w.zeros_ordered);
      EXPECT_LE(relative_coeff_error(back, add_constant(w.q, Complex(1))),
                ldexp(Real(1L), -static_cast<long>(working_precision() / 2)));
    }
  }
  EXPECT_THROW(build_q_n(op({0, 1}), P({1, 1}), P({1, 1}), 5), PreconditionError);
}

TEST(Perturb, Examples) {
  auto two = perturb_repeated_zeros({Complex(2), Complex(2)}, Real(1e-6));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_LE(abs(two[0] - Complex(2 + 2e-6)), Real(1e-15));
  EXPECT_LE(abs(two[1] - Complex(2 - 2e-6)), Real(1e-15));

  std::vector<Complex> distinct{Complex(1), Complex(0.0, 3.0), Complex(-2, 1)};
  EXPECT_EQ(perturb_repeated_zeros(distinct, Real(1e-6)), distinct);

  Real s(1e-5);
  auto three = perturb_repeated_zeros({Complex(3), Complex(3), Complex(3)}, s);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LE(abs(abs(three[i] - Complex(3)) - Real(3L) * s), Real(1e-15));
    for (std::size_t j = i + 1; j < 3; ++j) {
      EXPECT_GE(abs(three[i] - three[j]), Real(3L) * s * sqrt(Real(3L)) * Real(1.0 - 1e-9));
    }
  }
}

TEST(PrefixProduct, Examples) {
  auto one = prefix_product_check({Complex(1e6)}, Real(1L), Real(2e-6));
  EXPECT_TRUE(one.ok);
  EXPECT_LE(abs(one.max_dev - Real(1e-6)), Real(1e-15));
  auto none = prefix_product_check({}, Real(1L), Real(1e-9));
  EXPECT_TRUE(none.ok);
  EXPECT_TRUE(none.max_dev.is_zero());
  EXPECT_THROW(prefix_product_check({Complex(0.5)}, Real(1L), Real(1L)), PreconditionError);
}

TEST(PrefixProduct, MatchesExactExpansion) {
  std::vector<Complex> z;
  std::vector<QComplex> zq;
  for (int i = 0; i < 12; ++i) {
    long re = static_cast<long>(hftest::uniform_int(0, 200)) - 100, im = static_cast<long>(hftest::uniform_int(0, 200)) - 100;
    if (re * re + im * im < 400) re += 60;
    zq.emplace_back(mpq_class(re, 4), mpq_class(im, 4));
    z.emplace_back(Real(static_cast<double>(re) / 4.0), Real(static_cast<double>(im) / 4.0));
  }
  const Real R(2L);
  auto res = prefix_product_check(z, R, Real(1L));
  QPoly prod({q(1)});
  for (std::size_t k = 0; k < zq.size(); ++k) {
    prod = prod * QPoly({q(1), -(QComplex(q(1)) / zq[k])});
    Poly dev = add_constant(-to_poly(prod), Complex(1));
    Real exact = disk_norm_upper(dev, R);
    EXPECT_LE(abs(res.deviations[k] - exact), tol(24) * max(exact, Real(1L))) << k;
  }
}

TEST(TailBound, Examples) {
  for (std::size_t M = 4; M <= 10; ++M) {
    TailBoundResult t = taylor_tail_bound(M, 2 * M, Complex(0.01), Real(1.05), Real(0.9));
    ASSERT_TRUE(t.hypothesis_ok) << t.violation;
    EXPECT_LE(t.measured_upper, t.bound) << M;
  }
  TailBoundResult bad = taylor_tail_bound(20, 30, Complex(1), Real(1L), Real(0.2));
  EXPECT_FALSE(bad.hypothesis_ok);
  EXPECT_FALSE(bad.violation.empty());
}

TEST(TailBound, ZeroBlockExact) {
  for (std::size_t N = 2; N <= 24; ++N) {
    for (std::size_t M = 1; M < N; ++M) {
      QPoly prod = double_taylor_product<QComplex>(M, N, QComplex(mpq_class(3, 7), mpq_class(-2, 5)));
      ASSERT_EQ(prod[0], q(1));
      for (std::size_t k = 1; k <= M; ++k) ASSERT_TRUE(prod.coeff(k).is_zero()) << M << " " << N << " " << k;
    }
  }
}

// ||q_n||_{n^0.7} is nonincreasing once past its largest value.
TEST(Trend, QNormAfterBurnIn) {
  DiffOperator T = op({0, 1});
  Poly f = P({1, 1});
  std::vector<Real> norms;
  for (std::size_t n = 4; n <= 40; ++n) {
    StageWork w = build_quotient(T, f, P({1}), n, Complex(), ConstructionConfig{});
    norms.push_back(disk_norm_upper(w.q, real_pow(n, 0.7)));
  }
  std::size_t peak = 0;
  for (std::size_t i = 1; i < norms.size(); ++i) {
    if (norms[i] > norms[peak]) peak = i;
  }
  for (std::size_t i = peak + 1; i < norms.size(); ++i) EXPECT_LE(norms[i], norms[i - 1]) << i;
}
