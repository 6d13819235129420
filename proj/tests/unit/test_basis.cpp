#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "reluriesz/basis.hpp"
#include "reluriesz/errors.hpp"
#include "reluriesz/rng.hpp"

using namespace reluriesz;

TEST(EvalScalar, Nodes) {
  EXPECT_EQ(eval_scalar(BasisKind::Cos, 0.0), 1.0);
  EXPECT_EQ(eval_scalar(BasisKind::Cos, 0.5), -1.0);
  EXPECT_EQ(eval_scalar(BasisKind::Cos, 0.25), 0.0);
  EXPECT_EQ(eval_scalar(BasisKind::Sin, 0.125), 0.5);
  EXPECT_EQ(eval_scalar(BasisKind::Cos, 2.25), 0.0);
}

TEST(EvalScalar, InterpolatesTrigAtQuarterPoints) {
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    EXPECT_EQ(eval_scalar(BasisKind::Cos, t), std::round(std::cos(2 * std::numbers::pi * t)));
    EXPECT_EQ(eval_scalar(BasisKind::Sin, t), std::round(std::sin(2 * std::numbers::pi * t)));
  }
}

TEST(EvalScalar, NonFiniteRejected) {
  EXPECT_THROW(eval_scalar(BasisKind::Cos, std::numeric_limits<double>::infinity()), DomainError);
  EXPECT_THROW(eval_scalar(BasisKind::Sin, std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST(EvalScalar, MatchesPiecewiseOracle) {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double t = rng.uniform(-20.0, 20.0);
    EXPECT_NEAR(eval_scalar(BasisKind::Cos, t), oracle::C(t), 1e-13);
    EXPECT_NEAR(eval_scalar(BasisKind::Sin, t), oracle::S(t), 1e-13);
  }
}

TEST(EvalScalar, PeriodicitySymmetryRange) {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double t = rng.uniform(-1.0, 1.0);
    for (auto kind : {BasisKind::Cos, BasisKind::Sin}) {
      EXPECT_NEAR(eval_scalar(kind, t + 1.0), eval_scalar(kind, t), 1e-15);
      EXPECT_LE(std::abs(eval_scalar(kind, t)), 1.0);
    }
    EXPECT_NEAR(eval_scalar(BasisKind::Cos, 1.0 - t), eval_scalar(BasisKind::Cos, t), 1e-15);
    EXPECT_EQ(eval_scalar(BasisKind::Sin, t), eval_scalar(BasisKind::Cos, t + 0.75));
  }
}

TEST(EvalScalar, SquareIntegratesToOneThird) {
  const double v = oracle::piecewise_integral([](double t) { return std::pow(eval_scalar(BasisKind::Cos, t), 2); }, {0.0, 0.5, 1.0});
  EXPECT_NEAR(v, 1.0 / 3.0, 1e-10);
}

TEST(EvalBasis, Examples) {
  const std::vector<double> x{0.5, 0.25};
  EXPECT_EQ(eval_basis(BasisId::cos(MultiIndex{1, 2}), x), 1.0);
  EXPECT_EQ(eval_basis(BasisId::constant(), x), 1.0);
  EXPECT_EQ(eval_basis(BasisId::sin(MultiIndex{1}), std::vector<double>{0.125}), 0.5);
  EXPECT_THROW(eval_basis(BasisId::cos(MultiIndex{1, 2}), std::vector<double>{0.5}), DimensionError);
}

TEST(EvalBasis, HighDimensionalDotIsAccurate) {
  std::vector<std::int64_t> k(12);
  std::vector<double> x(12);
  Rng rng(3);
  for (std::size_t i = 0; i < k.size(); ++i) {
    k[i] = rng.uniform_int(-1000000, 1000000);
    x[i] = rng.uniform();
  }
  k[0] = 5;
  long double exact = 0;
  for (std::size_t i = 0; i < k.size(); ++i) exact += static_cast<long double>(k[i]) * x[i];
  EXPECT_NEAR(dot(MultiIndex(k), x), static_cast<double>(exact), 1e-9);
}

TEST(PositiveLeading, Cases) {
  EXPECT_TRUE(is_positive_leading(MultiIndex{1, -2}));
  EXPECT_FALSE(is_positive_leading(MultiIndex{0, -1}));
  EXPECT_FALSE(is_positive_leading(MultiIndex{0, 0}));
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    MultiIndex k{rng.uniform_int(-3, 3), rng.uniform_int(-3, 3), rng.uniform_int(-3, 3)};
    if (k.is_zero()) continue;
    EXPECT_NE(is_positive_leading(k), is_positive_leading(-k));
  }
}

TEST(BasisNorm, Values) {
  EXPECT_EQ(basis_l2_norm(BasisId::constant()), 1.0);
  EXPECT_DOUBLE_EQ(basis_l2_norm(BasisId::cos(MultiIndex{1})), 0.5773502691896258);
  EXPECT_DOUBLE_EQ(basis_l2_norm(BasisId::sin(MultiIndex{5, 3})), 1.0 / std::sqrt(3.0));
}

TEST(MultiIndex, NormsAndErrors) {
  MultiIndex k{3, -4};
  EXPECT_EQ(k.norm1(), 7);
  EXPECT_EQ(k.norm2_sq(), 25);
  EXPECT_THROW(MultiIndex(std::vector<std::int64_t>{}), DimensionError);
  EXPECT_THROW((MultiIndex{std::numeric_limits<std::int64_t>::max(), 1}.norm2_sq()), std::overflow_error);
  EXPECT_THROW(BasisId::cos(MultiIndex{-1, 0}), DomainError);
}

TEST(BasisKindNames, RoundTrip) {
  for (auto kind : {BasisKind::Const, BasisKind::Cos, BasisKind::Sin}) EXPECT_EQ(parse_kind(kind_name(kind)), kind);
}
