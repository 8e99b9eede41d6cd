#include <gtest/gtest.h>

#include <negser/series.hpp>

#include "oracles.hpp"

using namespace negser;
using R = Rational;
using S = TruncatedSeries<Rational>;

namespace {

S random_unit_series(oracle::Gen& gen, std::size_t order) {
  S s = S::one(order);
  for (std::size_t k = 1; k <= order; ++k) s[k] = gen.rational(9, 7);
  return s;
}

S poly(std::initializer_list<long> nums, std::size_t order) {
  S s(order);
  std::size_t k = 0;
  for (long v : nums) s[k++] = v;
  return s;
}

} // namespace

TEST(BinomialFactor, SquareRootOfOneMinusT) {
  EXPECT_EQ(binomial_factor(R(1), R(1, 2), 3), (S{R(1), R(-1, 2), R(-1, 8), R(-1, 16)}));
}

TEST(BinomialFactor, IntegerExponentIsPolynomial) {
  EXPECT_EQ(binomial_factor(R(2), R(1), 3), (S{R(1), R(-2), R(0), R(0)}));
}

TEST(BinomialFactor, MatchesTermByTermFormula) {
  oracle::Gen gen(5);
  for (int trial = 0; trial < 30; ++trial) {
    const R c = gen.positive(40, 9), mu = gen.positive(12, 11);
    const auto s = binomial_factor(c, mu, 12);
    const auto ref = oracle::binomial_terms(c, mu, 12);
    for (std::size_t k = 0; k <= 12; ++k) ASSERT_EQ(s[k], ref[k]);
  }
}

TEST(BinomialFactor, RejectsNonPositiveArguments) {
  EXPECT_THROW(binomial_factor(R(0), R(1, 2), 3), usage_error);
  EXPECT_THROW(binomial_factor(R(1), R(-1, 2), 3), usage_error);
  EXPECT_EQ(detail::raw_binomial_factor(R(0), R(1, 3), 3), S::one(3));
}

TEST(Mul, PolynomialProduct) {
  EXPECT_EQ(mul(poly({1, -2}, 3), poly({1, -1}, 3)), poly({1, -3, 2, 0}, 3));
}

TEST(Mul, IdentityAndMismatch) {
  oracle::Gen gen(8);
  const S a = random_unit_series(gen, 6);
  EXPECT_EQ(mul(a, S::one(6)), a);
  EXPECT_THROW(mul(a, S::one(5)), usage_error);
}

TEST(Mul, SquareRootFactorsMultiply) {
  const auto p = mul(binomial_factor(R(2), R(1, 2), 3), binomial_factor(R(1), R(1, 2), 3));
  // Q^2 = 1 - 3t + 2t^2 solved coefficientwise.
  const auto q = oracle::sqrt_by_squaring({R(1), R(-3), R(2), R(0)});
  EXPECT_EQ(p, (S{q[0], q[1], q[2], q[3]}));
  EXPECT_EQ(p, (S{R(1), R(-3, 2), R(-1, 8), R(-3, 16)}));
}

TEST(Mul, CommutativeAndAssociative) {
  oracle::Gen gen(21);
  for (int trial = 0; trial < 25; ++trial) {
    const S a = random_unit_series(gen, 10), b = random_unit_series(gen, 10), c = random_unit_series(gen, 10);
    ASSERT_EQ(mul(a, b), mul(b, a));
    ASSERT_EQ(mul(mul(a, b), c), mul(a, mul(b, c)));
  }
}

TEST(Pow, SquareRootExample) {
  EXPECT_EQ(pow(poly({1, -3, 2}, 3), R(1, 2)), (S{R(1), R(-3, 2), R(-1, 8), R(-3, 16)}));
}

TEST(Pow, TrivialExponents) {
  oracle::Gen gen(2);
  const S a = random_unit_series(gen, 8);
  EXPECT_EQ(pow(a, R(1)), a);
  EXPECT_EQ(pow(a, R(0)), S::one(8));
  EXPECT_EQ(pow(a, R(2)), mul(a, a));
  S bad = a;
  bad[0] = 2;
  EXPECT_THROW(pow(bad, R(1, 2)), usage_error);
}

TEST(Pow, AgreesWithSquaringOracle) {
  oracle::Gen gen(17);
  for (int trial = 0; trial < 20; ++trial) {
    const S a = random_unit_series(gen, 12);
    const auto q = oracle::sqrt_by_squaring(std::vector<R>(a.coeffs().begin(), a.coeffs().end()));
    ASSERT_EQ(pow(a, R(1, 2)), S(q));
  }
}

TEST(Pow, RationalExponentRaisedBack) {
  // (A^{p/q})^q = A^p through repeated multiplication.
  oracle::Gen gen(4);
  for (int trial = 0; trial < 10; ++trial) {
    const S a = random_unit_series(gen, 9);
    const long p = gen.integer(1, 4), q = gen.integer(2, 4);
    const S b = pow(a, R(p, q));
    S lhs = S::one(9), rhs = S::one(9);
    for (long i = 0; i < q; ++i) lhs = mul(lhs, b);
    for (long i = 0; i < p; ++i) rhs = mul(rhs, a);
    ASSERT_EQ(lhs, rhs);
  }
}

TEST(Pow, ExponentAdditivityAndProductRule) {
  oracle::Gen gen(9);
  for (int trial = 0; trial < 20; ++trial) {
    const S a = random_unit_series(gen, 10), b = random_unit_series(gen, 10);
    const R r1 = gen.rational(5, 7), r2 = gen.rational(5, 7);
    ASSERT_EQ(pow(a, r1 + r2), mul(pow(a, r1), pow(a, r2)));
    ASSERT_EQ(pow(mul(a, b), r1), mul(pow(a, r1), pow(b, r1)));
  }
}

TEST(BinomialFactor, MergeIdentity) {
  oracle::Gen gen(13);
  for (int trial = 0; trial < 20; ++trial) {
    const R c = gen.positive(30, 7), m1 = gen.positive(5, 9), m2 = gen.positive(5, 9);
    ASSERT_EQ(binomial_factor(c, m1 + m2, 15), mul(binomial_factor(c, m1, 15), binomial_factor(c, m2, 15)));
  }
}

TEST(LogExp, LogOfOneMinusT) {
  EXPECT_EQ(log_series(poly({1, -1}, 3)), (S{R(0), R(-1), R(-1, 2), R(-1, 3)}));
}

TEST(LogExp, ExpOfZeroAndRoundTrip) {
  EXPECT_EQ(exp_series(S(4)), S::one(4));
  EXPECT_EQ(exp_series(log_series(poly({1, -3, 2}, 5))), poly({1, -3, 2, 0, 0, 0}, 5));
  EXPECT_THROW(exp_series(S::one(3)), usage_error);
  EXPECT_THROW(log_series(S(3)), usage_error);
}

TEST(LogExp, MutuallyInverse) {
  oracle::Gen gen(31);
  for (int trial = 0; trial < 15; ++trial) {
    const S a = random_unit_series(gen, 10);
    ASSERT_EQ(exp_series(log_series(a)), a);
    S z = a;
    z[0] = 0;
    ASSERT_EQ(log_series(exp_series(z)), z);
  }
}

TEST(Coefficient, Indexing) {
  const S p = poly({1, -3, 2, 0}, 3);
  EXPECT_EQ(coefficient(p, 1), R(-3));
  EXPECT_EQ(coefficient(p, 0), R(1));
  EXPECT_EQ(coefficient(binomial_factor(R(1), R(1, 2), 3), 2), R(-1, 8));
  EXPECT_THROW(coefficient(p, 4), std::out_of_range);
}

TEST(Geometric, Powers) {
  EXPECT_EQ(geometric(R(2), 3), (S{R(1), R(2), R(4), R(8)}));
  EXPECT_EQ(geometric(R(0), 3), S::one(3));
  EXPECT_EQ(geometric(R(1, 2), 2), (S{R(1), R(1, 2), R(1, 4)}));
}

TEST(Geometric, InvertsLinearFactor) {
  oracle::Gen gen(6);
  for (int trial = 0; trial < 10; ++trial) {
    const R c = gen.rational();
    S lin = S::one(12);
    lin[1] = -c;
    ASSERT_EQ(mul(geometric(c, 12), lin), S::one(12));
  }
}

TEST(Series, OrderMustBePositive) {
  EXPECT_THROW(S(0), usage_error);
  EXPECT_THROW(S(std::vector<R>{R(1)}), usage_error);
}

TEST(FloatSeries, MatchesWidenedExact) {
  PrecisionScope p(128);
  const auto exact = mul(binomial_factor(R(3, 2), R(1, 3), 30), binomial_factor(R(1, 2), R(2, 3), 30));
  const auto fl = mul(binomial_factor(Float::from_rational(R(3, 2), 128), Float::from_rational(R(1, 3), 128), 30),
                      binomial_factor(Float::from_rational(R(1, 2), 128), Float::from_rational(R(2, 3), 128), 30));
  const auto w = widen(exact, 128);
  for (std::size_t k = 0; k <= 30; ++k) {
    Float scale = abs(w[k]);
    if (scale < Float(1)) scale = Float(1);
    EXPECT_TRUE(abs(fl[k] - w[k]) <= Float::from_double(1e-30) * scale) << k;
  }
}

TEST(FloatSeries, PrecisionMismatchRejected) {
  auto a = [] {
    PrecisionScope p(128);
    return binomial_factor(Float(1), Float::from_rational(R(1, 2), 128), 4);
  }();
  auto b = [] {
    PrecisionScope p(64);
    return binomial_factor(Float(1), Float::from_rational(R(1, 2), 64), 4);
  }();
  EXPECT_THROW(mul(a, b), domain_mismatch);
}
