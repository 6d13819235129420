#include <gtest/gtest.h>

#include <cmath>

#include "reluriesz/errors.hpp"
#include "reluriesz/lattice.hpp"
#include "reluriesz/recovery.hpp"
#include "reluriesz/rng.hpp"

using namespace reluriesz;

namespace {

RieszCoeffs sparse_truth(int d, double R, std::size_t sparsity, std::uint64_t seed) {
  const auto ids = recovery_basis(R, d);
  Rng rng(seed);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ids.size()));
  std::size_t placed = 0;
  while (placed < sparsity) {
    const auto j = rng.uniform_int(0, static_cast<std::int64_t>(ids.size()) - 1);
    if (v(j) != 0.0) continue;
    v(j) = rng.normal();
    ++placed;
  }
  return coeffs_from_vector(ids, v, d);
}

}  // namespace

TEST(Basis, OrderAndSize) {
  const auto ids = recovery_basis(1.5, 2);
  ASSERT_EQ(ids.size(), 1u + 2 * 4);
  EXPECT_EQ(ids[0].kind, BasisKind::Const);
  EXPECT_EQ(ids[1], BasisId::cos(MultiIndex{0, 1}));
  EXPECT_EQ(ids[2], BasisId::sin(MultiIndex{0, 1}));
  EXPECT_EQ(recovery_basis(3.0, 1).size(), 7u);
}

TEST(Design, EntriesAndVectorRoundTrip) {
  const auto ids = recovery_basis(2.0, 1);
  const std::vector<std::vector<double>> pts{{0.0}, {0.125}, {0.3}};
  const auto A = design_matrix(pts, ids);
  EXPECT_EQ(A(0, 0), 1.0);
  EXPECT_EQ(A(0, 1), 1.0);
  EXPECT_EQ(A(1, 2), eval_basis(BasisId::sin(MultiIndex{1}), pts[1]));
  RieszCoeffs g(1, 0.5);
  g.add(MultiIndex{2}, 0.0, -1.0);
  EXPECT_EQ(coeffs_from_vector(ids, vector_from_coeffs(ids, g), 1), g);
  EXPECT_THROW(design_matrix({{0.1, 0.2}}, ids), DimensionError);
}

TEST(LeastSquares, InterpolatesGeneratorInBasis) {
  for (int d = 1; d <= 3; ++d) {
    const double R = d == 3 ? 2.0 : 3.0;
    const auto truth = sparse_truth(d, R, 4, 10 + d);
    const auto n = recovery_basis(R, d).size();
    const auto samples = draw_samples(truth, 3 * n, 7);
    const auto rec = least_squares_recover(samples, R);
    EXPECT_LT(rec.report.residual_rms, 1e-10);
    EXPECT_LT(l2_norm(linear_combination(1.0, truth, -1.0, rec.coeffs)), 1e-8);
    EXPECT_FALSE(rec.report.rank_deficient);
    EXPECT_GT(rec.report.sigma_min, 0.0);
    EXPECT_LT(rec.report.normal_residual, 1e-9);
  }
}

TEST(LeastSquares, NormalEquationsHold) {
  RandomSpec spec{1, 0.75, 20.0, std::nullopt, 1.25, 3};
  const auto f = random_unit_ball_riesz(NormSpace::BsSeq, spec);
  const auto samples = draw_samples(f, 100, 4);
  const auto rec = least_squares_recover(samples, 6.0);
  EXPECT_GT(rec.report.residual_rms, 0.0);
  EXPECT_LT(rec.report.normal_residual, 1e-9 * 100);
  EXPECT_THROW(least_squares_recover(draw_samples(f, 5, 1), 6.0), UsageError);
}

TEST(LeastSquares, RankDeficientGivesMinimumNorm) {
  SampleSet s;
  s.dim = 1;
  for (int i = 0; i < 10; ++i) {
    s.points.push_back({0.0});
    s.values.push_back(1.0);
  }
  const auto rec = least_squares_recover(s, 1.0);
  EXPECT_TRUE(rec.report.rank_deficient);
  EXPECT_LT(rec.report.residual_rms, 1e-12);
  // Only the constant and C_1 are nonzero at x = 0; minimum norm splits the value evenly.
  EXPECT_NEAR(rec.coeffs.constant, 0.5, 1e-12);
}

TEST(BasisPursuit, RecoversSparseVector) {
  const auto truth = sparse_truth(2, 4.0, 3, 21);
  const auto samples = draw_samples(truth, 40, 22);
  const auto rec = basis_pursuit_recover(samples, 4.0, 1e-9);
  EXPECT_LE(rec.report.residual_rms, 1e-9 * (1 + 1e-6));
  const auto ids = recovery_basis(4.0, 2);
  const double err = (vector_from_coeffs(ids, truth) - vector_from_coeffs(ids, rec.coeffs)).norm();
  EXPECT_LT(err, 1e-6 * vector_from_coeffs(ids, truth).norm());
}

TEST(BasisPursuit, L1NotWorseThanTruth) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto truth = sparse_truth(1, 10.0, 6, 100 + seed);
    const auto samples = draw_samples(truth, 15, seed);
    const double delta = 1e-3;
    const auto rec = basis_pursuit_recover(samples, 10.0, delta);
    const auto ids = recovery_basis(10.0, 1);
    EXPECT_LE(rec.report.residual_rms, delta * (1 + 1e-6));
    EXPECT_LE(vector_from_coeffs(ids, rec.coeffs).lpNorm<1>(), vector_from_coeffs(ids, truth).lpNorm<1>() * (1 + 1e-6));
  }
}

TEST(BasisPursuit, Degenerate) {
  RieszCoeffs zero(2);
  const auto samples = draw_samples(zero, 20, 1);
  const auto rec = basis_pursuit_recover(samples, 2.0, 0.0);
  EXPECT_TRUE(rec.coeffs.terms.empty());
  EXPECT_EQ(rec.coeffs.constant, 0.0);

  RieszCoeffs small(1, 1e-3);
  const auto rs = basis_pursuit_recover(draw_samples(small, 10, 2), 2.0, 1.0);
  EXPECT_EQ(rs.coeffs.constant, 0.0);
  EXPECT_TRUE(rs.coeffs.terms.empty());

  // Duplicate points with conflicting values make delta = 0 unattainable.
  SampleSet s;
  s.dim = 1;
  s.points = {{0.2}, {0.2}};
  s.values = {0.0, 1.0};
  EXPECT_THROW(basis_pursuit_recover(s, 1.0, 0.0), DomainError);
  EXPECT_THROW(basis_pursuit_recover(samples, 2.0, -1.0), DomainError);
}

TEST(ErrorReport, ExactAndMonteCarlo) {
  RieszCoeffs truth(1, 0.0);
  truth.add(MultiIndex{1}, 1.0, 0.0);
  RieszCoeffs rec(1, 0.0);
  ErrorReportOptions opt;
  opt.p_list = {2.0, INFINITY};
  opt.n_mc = 20000;
  const auto rep = recovery_error_report(truth, rec, opt);
  EXPECT_NEAR(rep.l2_exact, 1.0 / std::sqrt(3.0), 1e-12);
  ASSERT_EQ(rep.lp.size(), 2u);
  EXPECT_NEAR(rep.lp[0].value, 1.0 / std::sqrt(3.0), 6 * rep.lp[0].standard_error);
  EXPECT_NEAR(rep.lp[1].value, 1.0, 1e-3);
  EXPECT_EQ(rep.two_term_bound.size(), 2u);
}

TEST(DefaultDelta, Scaling) {
  EXPECT_NEAR(default_delta(0.5, 4.0) * 2.0, barron_tail_constant(0.5), 1e-12);
  EXPECT_THROW(default_delta(0.5, 0.0), DomainError);
}
