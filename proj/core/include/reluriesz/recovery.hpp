#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "reluriesz/approx.hpp"
#include "reluriesz/basis.hpp"
#include "reluriesz/spectrum.hpp"

namespace reluriesz {

struct SampleSet {
  int dim = 1;
  std::vector<std::vector<double>> points;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string generator_id;

  std::size_t size() const { return points.size(); }
};

/// N iid uniform points on [0,1]^d with exact function values.
SampleSet draw_samples(const RieszCoeffs& f, std::size_t N, std::uint64_t seed);
SampleSet draw_samples(const FourierCoeffs& f, std::size_t N, std::uint64_t seed);

/// The constant followed by C_k, S_k for every positive-leading k with ||k||_2 <= R.
std::vector<BasisId> recovery_basis(double R, int d);

/// A(i, j) = eval_basis(ids[j], points[i]).
Eigen::MatrixXd design_matrix(const std::vector<std::vector<double>>& points, const std::vector<BasisId>& ids);

/// Coefficient vector over ids back to the sparse container; exact zeros are dropped.
RieszCoeffs coeffs_from_vector(const std::vector<BasisId>& ids, const Eigen::VectorXd& c, int d);
Eigen::VectorXd vector_from_coeffs(const std::vector<BasisId>& ids, const RieszCoeffs& g);

enum class RecoveryMethod { LeastSquares, BasisPursuit };

std::string method_name(RecoveryMethod m);
RecoveryMethod parse_method(const std::string& name);

struct RecoveryReport {
  RecoveryMethod method = RecoveryMethod::LeastSquares;
  double radius = 0.0;
  std::size_t n_basis = 0;
  std::size_t n_samples = 0;
  double residual_rms = 0.0;
  /// Smallest / largest singular value of A / sqrt(N).
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  bool rank_deficient = false;
  /// ||A^T (A c - y)||_inf, the normal-equation residual.
  double normal_residual = 0.0;
  double delta = 0.0;
  std::size_t iterations = 0;
  /// Which solver branch produced the answer.
  std::string solver_path;
  bool converged = true;
};

struct Recovery {
  RieszCoeffs coeffs;
  RecoveryReport report;
};

/// Unweighted least squares over recovery_basis(R, d); minimum-norm solution
/// when the design matrix is rank deficient. N < n is a UsageError.
Recovery least_squares_recover(const SampleSet& samples, double R);

struct BasisPursuitOptions {
  std::size_t max_iterations = 50'000;
  double tolerance = 1e-9;
  /// Replace the ADMM iterate by least squares on its support when that is feasible and no worse.
  bool polish = true;
};

/// min ||c||_1 subject to sqrt(1/N sum (A c - y)_i^2) <= delta. The result is
/// always feasible. A delta below the smallest achievable RMS is a DomainError.
Recovery basis_pursuit_recover(const SampleSet& samples, double R, double delta, const BasisPursuitOptions& options = {});

/// barron_tail_constant(s) * R^{-s}
double default_delta(double s, double R);

struct ErrorReport {
  double l2_exact = 0.0;
  std::vector<LpEstimate> lp;
  /// C (k^{-1/p} sigma_k(f, l1) + k^{1/2 - 1/p} R^{-s} ||f||) for each p in the list.
  std::vector<double> two_term_bound;
};

struct ErrorReportOptions {
  std::vector<double> p_list = {2.0};
  std::size_t n_mc = 20'000;
  std::uint64_t seed = 0;
  /// Parameters of the two-term bound.
  std::size_t k = 1;
  double s = 0.5;
  double radius = 1.0;
  double constant = 1.0;
};

ErrorReport recovery_error_report(const RieszCoeffs& truth, const RieszCoeffs& recovered, const ErrorReportOptions& options);
ErrorReport recovery_error_report(const FourierCoeffs& truth, const RieszCoeffs& recovered, const ErrorReportOptions& options);

}  // namespace reluriesz
