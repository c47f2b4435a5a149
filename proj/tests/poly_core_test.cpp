#include <gtest/gtest.h>

#include "hyperfactor/poly.hpp"
#include "hyperfactor/roots.hpp"
#include "test_support.hpp"

using namespace hyperfactor;
using hftest::random_poly;

namespace {

Poly P(std::initializer_list<Complex> c) { return Poly(c); }

Real tol(long bits_below) { return ldexp(Real(1L), -(static_cast<long>(working_precision()) - bits_below)); }

}  // namespace

TEST(Eval, Examples) {
  EXPECT_EQ(eval(P({0, 0, 1}), Complex(2)), Complex(4));
  EXPECT_EQ(eval(Poly(), Complex(3.5, -1.0)), Complex());
  EXPECT_EQ(eval(P({1, 1, 1}), Complex(0.0, 1.0)), Complex(0.0, 1.0));
}

TEST(Poly, ZeroPolynomialDegree) {
  EXPECT_EQ(Poly().degree(), Poly::kZeroDegree);
  EXPECT_LT(Poly().degree(), -1000000L);
  EXPECT_EQ(P({1, 0, 0}).degree(), 0);
}

TEST(Differentiate, Examples) {
  EXPECT_EQ(differentiate(P({0, 0, 1})), P({0, 2}));
  EXPECT_TRUE(differentiate(P({5})).is_zero());
  EXPECT_EQ(differentiate(P({0, 1, 0, 3})), P({1, 0, 9}));
}

TEST(Antiderivative, Examples) {
  EXPECT_EQ(antiderivative(P({1})), P({0, 1}));
  for (std::size_t j = 0; j < 6; ++j) {
    Poly zj = Poly::monomial(Complex(1), j);
    Poly want = Poly::monomial(Complex(1) / Complex(static_cast<long>(j + 1)), j + 1);
    EXPECT_EQ(antiderivative(zj), want) << j;
  }
}

TEST(Antiderivative, RightInverseOfDifferentiate) {
  for (int t = 0; t < 40; ++t) {
    Poly p = random_poly(hftest::uniform_int(0, 10));
    Poly back = differentiate(antiderivative(p));
    EXPECT_LE(relative_coeff_error(back, p), tol(8));
    EXPECT_TRUE(eval(antiderivative(p), Complex()).is_zero());
  }
}

TEST(Antiderivative, ExactInRationalMode) {
  for (int t = 0; t < 30; ++t) {
    std::vector<QComplex> c;
    std::size_t d = hftest::uniform_int(0, 12);
    for (std::size_t i = 0; i <= d; ++i) {
      c.emplace_back(mpq_class(static_cast<long>(hftest::uniform_int(0, 40)) - 20, hftest::uniform_int(1, 9)),
                     mpq_class(static_cast<long>(hftest::uniform_int(0, 40)) - 20, hftest::uniform_int(1, 9)));
      c.back().re.canonicalize();
      c.back().im.canonicalize();
    }
    QPoly p(std::move(c));
    EXPECT_EQ(differentiate(antiderivative(p)), p);
  }
}

TEST(DiskNorm, Monomial) {
  DiskNormEstimate e = disk_norm(P({0, 0, 1}), Real(2L), 64);
  EXPECT_LE(abs(e.lower - Real(4L)), tol(8));
  EXPECT_LE(abs(e.upper - Real(4L)), tol(8));
}

TEST(DiskNorm, OnePlusZ) {
  DiskNormEstimate e = disk_norm(P({1, 1}), Real(1L), 256);
  EXPECT_LE(abs(e.upper - Real(2L)), tol(8));
  EXPECT_LE(abs(e.lower - Real(2L)), tol(8));  // z = 1 is a sample point
}

TEST(DiskNorm, ZSquaredMinusOne) {
  DiskNormEstimate e = disk_norm(P({-1, 0, 1}), Real(1L), 4096);
  EXPECT_LE(abs(e.lower - Real(2L)), Real(1e-6));
  EXPECT_LE(e.lower, e.upper);
}

TEST(DiskNorm, LowerNeverExceedsUpper) {
  for (int t = 0; t < 50; ++t) {
    Poly p = random_poly(hftest::uniform_int(0, 30));
    Real R(static_cast<double>(hftest::uniform_int(1, 50)) / 10.0);
    DiskNormEstimate e = disk_norm(p, R);
    EXPECT_LE(e.lower, e.upper);
    EXPECT_GE(e.samples, std::size_t{256});
  }
  for (std::size_t k = 0; k < 8; ++k) {
    Poly m = Poly::monomial(Complex(0.75, -0.5), k);
    DiskNormEstimate e = disk_norm(m, Real(3L), 128);
    EXPECT_LE(abs(e.upper - e.lower), tol(16) * e.upper);
  }
}

TEST(Roots, Examples) {
  auto r = root_values(roots(P({-1, 0, 1})));
  ASSERT_EQ(r.size(), 2u);
  Real a = abs(r[0] - Complex(1)), b = abs(r[0] - Complex(-1));
  EXPECT_LE(min(a, b), tol(32));
  Poly cubic = from_roots({Complex(2), Complex(3), Complex(4)});
  auto rc = root_values(roots(cubic));
  ASSERT_EQ(rc.size(), 3u);
  for (long want : {2L, 3L, 4L}) {
    Real best = abs(rc[0] - Complex(want));
    for (const auto& z : rc) best = min(best, abs(z - Complex(want)));
    EXPECT_LE(best, tol(32)) << want;
  }
  for (const auto& rt : roots(cubic)) EXPECT_LE(rt.residual, tol(32));
}

TEST(Roots, ReconstructionRandom) {
  for (int t = 0; t < 100; ++t) {
    Poly p = random_poly(hftest::uniform_int(1, 40));
    auto z = root_values(roots(p));
    ASSERT_EQ(z.size(), static_cast<std::size_t>(p.degree()));
    Poly back = from_roots(z, p.leading());
    EXPECT_LE(relative_coeff_error(back, p), ldexp(Real(1L), -static_cast<long>(working_precision() / 2))) << t;
  }
}

TEST(Roots, Degree40Reconstruction) {
  Poly p = random_poly(40);
  Poly back = from_roots(root_values(roots(p)), p.leading());
  EXPECT_LE(max_coeff_diff(back, p), ldexp(max_coeff_abs(p), -static_cast<long>(working_precision() / 2)));
}

TEST(Roots, ConstantRejected) { EXPECT_THROW(roots(P({3})), PreconditionError); }

TEST(Roots, ModulusBounds) {
  Poly p = from_roots({Complex(3), Complex(0.0, -5.0), Complex(7, 7)});
  ModulusBounds b = min_modulus_bounds(p);
  EXPECT_LE(b.log2_lower, std::log2(3.0) + 1e-9);
  EXPECT_GE(b.log2_upper, std::log2(3.0) - 1e-9);
  EXPECT_TRUE(certify_zero_within(p, 3.5));
  EXPECT_FALSE(certify_zero_within(p, 2.5));
}

TEST(Divide, Examples) {
  auto d = divide(P({0, 0, 0, 1}), P({-1, 0, 1}));
  EXPECT_EQ(d.quotient, P({0, 1}));
  EXPECT_EQ(d.remainder, P({0, 1}));
  Poly f = P({1, 2, 3});
  auto s = divide(f, f);
  EXPECT_EQ(s.quotient, P({1}));
  EXPECT_LE(max_coeff_abs(s.remainder), tol(32));
  auto low = divide(P({1, 1}), f);
  EXPECT_TRUE(low.quotient.is_zero());
  EXPECT_EQ(low.remainder, P({1, 1}));
  EXPECT_THROW(divide(f, Poly()), PreconditionError);
}

TEST(Divide, RecombinationRandom) {
  for (int t = 0; t < 500; ++t) {
    Poly g = random_poly(hftest::uniform_int(0, 60));
    Poly f = random_poly(hftest::uniform_int(0, 60));
    auto d = divide(g, f);
    EXPECT_LT(d.remainder.degree(), f.degree());
    Poly back = f * d.quotient + d.remainder;
    Real scale = max(max_coeff_abs(g), max_coeff_abs(f) * max_coeff_abs(d.quotient) * Real(f.degree() + 1L));
    EXPECT_LE(max_coeff_diff(back, g), tol(32) * scale) << t;
  }
}

TEST(Ring, Axioms) {
  for (int t = 0; t < 50; ++t) {
    Poly a = random_poly(hftest::uniform_int(0, 12));
    Poly b = random_poly(hftest::uniform_int(0, 12));
    Poly c = random_poly(hftest::uniform_int(0, 12));
    EXPECT_LE(relative_coeff_error((a + b) + c, a + (b + c)), tol(16));
    EXPECT_LE(relative_coeff_error((a * b) * c, a * (b * c)), tol(16));
    EXPECT_LE(relative_coeff_error(a * (b + c), a * b + a * c), tol(16));
  }
}

TEST(Trim, RemovesExactZerosOnly) {
  Poly p(std::vector<Complex>{Complex(1), Complex(2), Complex()});
  EXPECT_EQ(p.degree(), 1);
  Poly dust(std::vector<Complex>{Complex(1), Complex(ldexp(Real(1L), -300))});
  EXPECT_EQ(dust.degree(), 1);
  EXPECT_EQ(trimmed(dust, ldexp(Real(1L), -(static_cast<long>(working_precision()) - 16))).degree(), 0);
}
