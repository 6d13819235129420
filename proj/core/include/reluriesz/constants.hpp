#pragma once

#include <cmath>
#include <numbers>

namespace reluriesz {

/// Lattice counting constants. c1 is the volumetric constant 3*sqrt(2*pi*e);
/// c2 must satisfy c2 >= (c1/2)^4 and c2 >= 4e.
struct LatticeConstants {
  double c1 = 3.0 * std::sqrt(2.0 * std::numbers::pi * std::numbers::e);
  double c2 = 1500.0;
};

/// Pi^2 / 8, the prefactor of the cosine/sine to C/S expansions
/// (equal to sqrt(3) / (sqrt(2) * kappa) with kappa^2 = 96 / pi^4).
inline constexpr double kMobiusPrefactor = std::numbers::pi * std::numbers::pi / 8.0;

/// Upper Riesz bound of the unnormalized mean-zero system:
/// ||sum a_k C_k + b_k S_k||_2^2 <= kRieszUpper * sum (a_k^2 + b_k^2).
inline constexpr double kRieszUpper = 0.5;
inline constexpr double kRieszLower = 1.0 / 6.0;

/// Default truncations of the cos/sin <-> C/S series.
inline constexpr int kDefaultMobiusTruncation = 101;
inline constexpr int kDefaultHarmonicCap = 203;

// Frozen calibrations. Regenerate with tools/calibrate (rrcalibrate).

/// Constant of the large-l regime of the lower bound on partial sums of the
/// nondecreasing weight rearrangement, as a function of s.
double weight_lower_bound_constant(double s);

/// Multiplier C_s of the three-regime sigma_n(b_s^d, l2)^2 bound (d >= 2).
double sigma_bound_constant(double s);

/// Default C_s in R = (C_s / eps)^{1/s} for Sobolev truncation of generator coefficients.
double sobolev_radius_constant(double s);

/// Sup-norm tail constant: ||f^R||_inf <= C * R^{-s} * ||f||_{B^s} with
/// C = sqrt(2) * pi^2/8 * sum over odd squarefree n of n^{s-2}. Computed
/// with a rigorous tail estimate, not calibrated.
double barron_tail_constant(double s);

}  // namespace reluriesz
