#include <gtest/gtest.h>

#include <negser/theorem.hpp>

#include "oracles.hpp"

using namespace negser;
using R = Rational;
using S = TruncatedSeries<Rational>;

namespace {

ExactInstance golden() { return ExactInstance::make({R(2), R(1)}, {R(1, 2), R(1, 2)}); }

std::vector<R> d_vec(const DCoefficients<R>& d) { return d.d(); }

} // namespace

TEST(Instance, Validation) {
  EXPECT_NO_THROW(golden());
  try {
    ExactInstance::make({R(1), R(2)}, {R(1, 2), R(1, 2)});
    FAIL();
  } catch (const instance_error& e) {
    EXPECT_EQ(e.code, InstanceErrc::ordering_violated);
    EXPECT_EQ(e.index, 2u);
  }
  try {
    ExactInstance::make({R(2), R(1)}, {R(1, 2), R(2, 3)});
    FAIL();
  } catch (const instance_error& e) {
    EXPECT_EQ(e.code, InstanceErrc::rho_exceeds_one);
    EXPECT_NE(std::string(e.what()).find("7/6"), std::string::npos);
  }
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const instance_error& e) {
      return e.code;
    }
    return InstanceErrc::schema;
  };
  EXPECT_EQ(code_of([] { ExactInstance::make({R(2), R(2)}, {R(1, 4), R(1, 4)}); }), InstanceErrc::ordering_violated);
  EXPECT_EQ(code_of([] { ExactInstance::make({R(2), R(0)}, {R(1, 4), R(1, 4)}); }), InstanceErrc::nonpositive_c);
  EXPECT_EQ(code_of([] { ExactInstance::make({R(2), R(1)}, {R(1, 4), R(0)}); }), InstanceErrc::nonpositive_mu);
  EXPECT_EQ(code_of([] { ExactInstance::make({R(2)}, {R(1, 4), R(1, 4)}); }), InstanceErrc::length_mismatch);
  EXPECT_EQ(code_of([] { ExactInstance::make({}, {}); }), InstanceErrc::empty);
}

TEST(Instance, TheoremApplicable) {
  EXPECT_TRUE(golden().theorem_applicable());
  EXPECT_FALSE(ExactInstance::make({R(3)}, {R(1)}).theorem_applicable());
  EXPECT_TRUE(ExactInstance::make({R(3)}, {R(9, 10)}).theorem_applicable());
}

TEST(Instance, FloatGap) {
  PrecisionScope p(128);
  auto f = [](const char* a, const char* b) {
    return FloatInstance::make({Float::from_rational(parse_decimal(a), 128), Float::from_rational(parse_decimal(b), 128)},
                               {Float::from_rational(R(1, 2), 128), Float::from_rational(R(1, 2), 128)});
  };
  EXPECT_NO_THROW(f("1.000001", "1"));
  EXPECT_THROW(f("1.0000000000001", "1"), instance_error);
}

TEST(PartialProduct, GoldenInstance) {
  EXPECT_EQ(partial_product(golden(), 2, 3), (S{R(1), R(-3, 2), R(-1, 8), R(-3, 16)}));
  EXPECT_EQ(partial_product(golden(), 1, 3), binomial_factor(R(2), R(1, 2), 3));
  EXPECT_THROW(partial_product(golden(), 3, 3), std::out_of_range);
  EXPECT_THROW(partial_product(golden(), 0, 3), std::out_of_range);
}

TEST(PartialProduct, IntegerExponentFirstFactor) {
  const auto inst = ExactInstance::make({R(2)}, {R(1)});
  EXPECT_EQ(partial_product(inst, 1, 4), (S{R(1), R(-2), R(0), R(0), R(0)}));
}

TEST(PartialProduct, StepRecurrenceAndFullProduct) {
  oracle::Gen gen(41);
  const auto inst = gen.instance(5);
  const auto all = partial_products(inst, 12);
  ASSERT_EQ(all.size(), 5u);
  for (std::size_t k = 2; k <= 5; ++k)
    EXPECT_EQ(all[k - 1], mul(all[k - 2], binomial_factor(inst.c_at(k), inst.mu_at(k), 12)));
  EXPECT_EQ(all.back(), partial_product(inst, 5, 12));
}

TEST(DSeries, Examples) {
  EXPECT_EQ(d_vec(d_series(golden(), 3)), (std::vector<R>{R(3, 2), R(1, 8), R(3, 16)}));
  const auto single = ExactInstance::make({R(5, 2)}, {R(1)});
  const auto d = d_series(single, 6);
  EXPECT_EQ(d.at(1), R(5, 2));
  for (std::size_t j = 2; j <= 6; ++j) EXPECT_EQ(d.at(j), R(0));
  EXPECT_EQ(d_vec(d_series(ExactInstance::make({R(1)}, {R(1, 2)}), 3)), (std::vector<R>{R(1, 2), R(1, 8), R(1, 16)}));
}

TEST(DSeries, MatchesCompositionEnumeration) {
  oracle::Gen gen(19);
  for (int trial = 0; trial < 12; ++trial) {
    const auto inst = gen.instance(static_cast<std::size_t>(gen.integer(1, 4)), R(gen.integer(1, 10), 10));
    ASSERT_EQ(d_vec(d_series(inst, 9)), oracle::brute_force_d(inst, 9));
  }
}

TEST(VerifyPositivity, Examples) {
  const auto v = verify_positivity(d_series(golden(), 3));
  EXPECT_TRUE(v.all_positive);
  EXPECT_FALSE(v.first_failure);
  EXPECT_EQ(v.min_index, 2u);
  EXPECT_EQ(v.min_value, R(1, 8));

  const DCoefficients<R> tampered({R(1, 2), R(0), R(1, 16)}, golden());
  const auto vt = verify_positivity(tampered);
  EXPECT_FALSE(vt.all_positive);
  EXPECT_EQ(vt.first_failure, 2u);

  const auto single = ExactInstance::make({R(3)}, {R(1)});
  EXPECT_EQ(verify_positivity(d_series(single, 3)).first_failure, 2u);
}

TEST(VerifyPositivity, FirstFailureIsMinimal) {
  DCoefficients<R> d({R(1), R(2), R(-1), R(0), R(-5)}, golden());
  const auto v = verify_positivity(d);
  EXPECT_EQ(v.first_failure, 3u);
  EXPECT_EQ(v.min_index, 5u);
  d.override_at(3, R(1));
  EXPECT_EQ(verify_positivity(d).first_failure, 4u);
}

TEST(D1ClosedForm, Examples) {
  EXPECT_EQ(d1_closed_form(golden()), R(3, 2));
  EXPECT_GT(d1_closed_form(golden()), R(1));
  EXPECT_EQ(d1_closed_form(ExactInstance::make({R(7, 3)}, {R(1)})), R(7, 3));
  const auto three = ExactInstance::make({R(3), R(2), R(1)}, {R(1, 3), R(1, 3), R(1, 3)});
  EXPECT_EQ(d1_closed_form(three), R(2));
  EXPECT_EQ(d_series(three, 2).at(1), R(2));
}

TEST(D1ClosedForm, EqualsFirstCoefficientAndExceedsSmallestBase) {
  oracle::Gen gen(77);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = gen.instance(static_cast<std::size_t>(gen.integer(1, 6)));
    const auto d = d_series(inst, 3);
    ASSERT_EQ(d.at(1), d1_closed_form(inst));
    if (inst.size() >= 2) {
      ASSERT_GT(d.at(1), inst.c().back());
    }
  }
}

TEST(ScaleRho, GoldenHalf) {
  const auto d = d_series(golden(), 20);
  const auto scaled = scale_rho(d, R(1, 2));
  const auto direct = d_series(ExactInstance::make({R(2), R(1)}, {R(1, 4), R(1, 4)}), 20);
  EXPECT_EQ(scaled, direct);
  EXPECT_EQ(scaled.source(), ExactInstance::make({R(2), R(1)}, {R(1, 4), R(1, 4)}));
}

TEST(ScaleRho, FirstCoefficientScalesLinearly) {
  oracle::Gen gen(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = d_series(gen.instance(3), 8);
    EXPECT_EQ(scale_rho(d, R(1, 3)).at(1), R(1, 3) * d.at(1));
  }
}

TEST(ScaleRho, Preconditions) {
  const auto d = d_series(golden(), 5);
  EXPECT_THROW(scale_rho(d, R(1)), usage_error);
  EXPECT_THROW(scale_rho(d, R(0)), usage_error);
  EXPECT_THROW(scale_rho(d, R(3, 2)), usage_error);
  const auto partial = d_series(ExactInstance::make({R(2), R(1)}, {R(1, 4), R(1, 4)}), 5);
  EXPECT_THROW(scale_rho(partial, R(1, 2)), usage_error);
}

TEST(ScaleRho, MatchesScaledInstances) {
  oracle::Gen gen(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = gen.instance(static_cast<std::size_t>(gen.integer(2, 5)));
    const R rho = R(gen.integer(1, 9), 10);
    ASSERT_EQ(scale_rho(d_series(inst, 15), rho), d_series(scale_mu(inst, rho), 15));
  }
}

TEST(Reductions, DropZero) {
  const auto inst = ExactInstance::make({R(2), R(1), R(1, 2)}, {R(1, 2), R(1, 4), R(1, 4)});
  const auto dropped = reduce_drop_zero(inst);
  EXPECT_EQ(dropped, ExactInstance::make({R(2), R(1)}, {R(1, 2), R(1, 4)}));
  EXPECT_EQ(partial_product(dropped, 2, 12), product_with_last_c(inst, R(0), 12));
  EXPECT_EQ(d1_closed_form(dropped), R(5, 4));

  const auto two = reduce_drop_zero(golden());
  EXPECT_EQ(two.size(), 1u);
  EXPECT_TRUE(two.theorem_applicable());
  EXPECT_THROW(reduce_drop_zero(two), usage_error);
}

TEST(Reductions, MergeEqual) {
  const auto inst = ExactInstance::make({R(2), R(1), R(1, 2)}, {R(1, 2), R(1, 4), R(1, 4)});
  const auto merged = reduce_merge_equal(inst);
  EXPECT_EQ(merged, golden());
  EXPECT_EQ(d_series(merged, 12).as_series(), product_with_last_c(inst, R(1), 12));
  EXPECT_EQ(d1_closed_form(merged), R(2) * R(1, 2) + R(1) * R(1, 4) + R(1) * R(1, 4));

  const auto boundary = reduce_merge_equal(ExactInstance::make({R(3, 2), R(1)}, {R(1, 2), R(1, 2)}));
  EXPECT_EQ(boundary, ExactInstance::make({R(3, 2)}, {R(1)}));
  EXPECT_FALSE(boundary.theorem_applicable());
  const auto d = d_series(boundary, 5);
  EXPECT_EQ(d.at(1), R(3, 2));
  for (std::size_t j = 2; j <= 5; ++j) EXPECT_EQ(d.at(j), R(0));
  EXPECT_THROW(reduce_merge_equal(boundary), usage_error);
}

TEST(Reductions, PreserveSeriesOnRandomInstances) {
  oracle::Gen gen(61);
  for (int trial = 0; trial < 15; ++trial) {
    const auto inst = gen.instance(static_cast<std::size_t>(gen.integer(2, 5)));
    ASSERT_EQ(partial_product(reduce_drop_zero(inst), inst.size() - 1, 14), product_with_last_c(inst, R(0), 14));
    const auto merged = reduce_merge_equal(inst);
    ASSERT_EQ(partial_product(merged, merged.size(), 14), product_with_last_c(inst, inst.c()[inst.size() - 2], 14));
  }
}

TEST(Oracle, ExpLogMatchesProduct) {
  oracle::Gen gen(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = gen.instance(static_cast<std::size_t>(gen.integer(1, 5)));
    ASSERT_EQ(exp_log_product(inst, 14), partial_product(inst, inst.size(), 14));
  }
}

TEST(TheoremProperty, RandomRationalInstancesArePositive) {
  oracle::Gen gen(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = static_cast<std::size_t>(gen.integer(1, 6));
    const R rho = gen.integer(0, 1) ? R(1) : R(gen.integer(1, 99), 100);
    const auto inst = gen.instance(n, rho);
    if (!inst.theorem_applicable()) continue;
    const auto v = verify_positivity(d_series(inst, 30));
    ASSERT_TRUE(v.all_positive) << "counterexample at trial " << trial << " D_" << *v.first_failure;
  }
}

TEST(TheoremProperty, ScaleCovariance) {
  // D_j(lambda c) = lambda^j D_j(c)
  oracle::Gen gen(88);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = gen.instance(static_cast<std::size_t>(gen.integer(1, 4)));
    const R lambda = gen.positive(9, 4);
    std::vector<R> c = inst.c();
    for (auto& x : c) x *= lambda;
    const auto scaled = d_series(ExactInstance::make(c, inst.mu()), 12);
    const auto base = d_series(inst, 12);
    R lj = 1;
    for (std::size_t j = 1; j <= 12; ++j) {
      lj *= lambda;
      ASSERT_EQ(scaled.at(j), lj * base.at(j));
    }
  }
}

TEST(FloatEngine, GoldenMatches) {
  PrecisionScope p(128);
  const auto f = widen(golden(), 128);
  const auto d = d_series(f, 3);
  EXPECT_EQ(d.at(1).to_double(), 1.5);
  EXPECT_EQ(d.at(2).to_double(), 0.125);
  EXPECT_EQ(d.at(3).to_double(), 0.1875);
  EXPECT_TRUE(verify_positivity(d, default_float_tolerance).all_positive);
  EXPECT_TRUE(f.rho_is_one());
}
