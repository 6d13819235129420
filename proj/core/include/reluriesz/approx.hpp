#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reluriesz/constants.hpp"
#include "reluriesz/network.hpp"
#include "reluriesz/spectrum.hpp"

namespace reluriesz {

/// (C / eps)^{1/s}
double radius_for_eps(double s, double eps, double C);

struct Truncation {
  RieszCoeffs head;
  RieszCoeffs tail;
  /// R^{-s} (sum over the tail of ||k||^{2s} (alpha^2 + beta^2))^{1/2}
  double tail_l2_bound = 0.0;
  /// ||tail||_2 computed exactly through the Gram form.
  double tail_l2_exact = 0.0;
};

/// Splits at ||k||_2 <= R using the exact integer test on ||k||_2^2.
Truncation truncate_radius(const RieszCoeffs& c, double R, double s);

struct NTermSelection {
  RieszCoeffs selected;
  /// l2 norm of the discarded coefficients.
  double sigma = 0.0;
  /// Selected entries, in selection order.
  std::vector<BasisId> order;
};

/// Keeps the n largest |alpha_k|, |beta_k| (ties: lexicographic k, alpha first).
/// The constant alpha0 is always kept and never counted.
NTermSelection best_n_term(const RieszCoeffs& c, std::size_t n);

/// Class bound for sigma_n over the unit ball of the weighted l1 space b_s^d:
/// d = 1 uses (s+1)/sqrt(2s+1) n^{-s-1/2}; d >= 2 uses the three-regime bound.
double sigma_upper_bound(std::uint64_t n, int d, double s, const LatticeConstants& c = {});

struct ApproxOptions {
  /// Radius constant; defaults to sobolev_radius_constant(s) resp. 1 for the Barron pipeline.
  std::optional<double> radius_constant;
  /// Overrides the radius altogether.
  std::optional<double> radius;
  int mobius_truncation = kDefaultMobiusTruncation;
};

struct ApproxReport {
  std::string pipeline;  // "sobolev" or "barron"
  Architecture architecture = Architecture::Stacked;
  double s = 0.0;
  double epsilon_target = 0.0;
  double radius = 0.0;
  /// Norm of the input in the pipeline's space (Ws/Fs or Bs/BsSeq).
  double input_norm = 0.0;
  std::string norm_space;
  std::size_t n_terms = 0;
  int width = 0;
  int depth = 0;
  std::uint64_t params_total = 0;
  std::uint64_t params_nonzero = 0;
  double error_l2_exact = 0.0;
  double error_bound_certified = 0.0;
  /// Sup-norm tail of the cos/sin -> C/S conversion (0 for generator input).
  double conversion_tail = 0.0;
  double sigma_n = 0.0;
  double sigma_class_bound = 0.0;
  bool target_met = false;
  bool width_bound_ok = true;
  bool depth_bound_ok = true;
};

struct ApproxResult {
  ReluNetwork net;
  RieszCoeffs realized;
  ApproxReport report;
};

ApproxResult approximate_sobolev(const RieszCoeffs& c, double s, double eps, Architecture arch,
                                 const ApproxOptions& options = {});
ApproxResult approximate_sobolev(const FourierCoeffs& f, double s, double eps, Architecture arch,
                                 const ApproxOptions& options = {});
ApproxResult approximate_barron(const RieszCoeffs& c, double s, double eps, Architecture arch,
                                const ApproxOptions& options = {});
ApproxResult approximate_barron(const FourierCoeffs& f, double s, double eps, Architecture arch,
                                const ApproxOptions& options = {});

struct LpEstimate {
  double p = 2.0;
  double value = 0.0;
  /// Delta-method standard error; 0 for p = infinity.
  double standard_error = 0.0;
  /// p = infinity: maxima over the random and the Halton points separately.
  double max_random = 0.0;
  double max_halton = 0.0;
  std::size_t n_samples = 0;
};

/// Monte Carlo ||reference - net||_p over uniform points; p = infinity also
/// scans a Halton sequence of the same length.
LpEstimate lp_error_mc(const RieszCoeffs& reference, const ReluNetwork& net, double p, std::size_t n_samples,
                       std::uint64_t seed);
LpEstimate lp_error_mc(const FourierCoeffs& reference, const ReluNetwork& net, double p, std::size_t n_samples,
                       std::uint64_t seed);

/// Monte Carlo ||g||_p on [0,1]^d; same sampling scheme as lp_error_mc.
LpEstimate lp_norm_mc(const std::function<double(std::span<const double>)>& g, int d, double p, std::size_t n_samples,
                      std::uint64_t seed);

/// Point i (0-based) of the Halton sequence in dimension d, skipping the origin.
std::vector<double> halton_point(std::uint64_t i, int d);

}  // namespace reluriesz
