#include "reluriesz/constants.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <vector>

#include "reluriesz/errors.hpp"

namespace reluriesz {

namespace {

// Calibration grid in s. Tables are produced by rrcalibrate; the lookup takes
// the worse of the two bracketing entries and applies a safety margin.
constexpr std::array<double, 5> kGridS = {0.0, 0.25, 0.5, 0.75, 1.0};

// BEGIN CALIBRATED TABLES
constexpr std::array<double, 5> kWeightConstant = {1, 0.72259, 0.522137, 0.377291, 0.272627};
constexpr std::array<double, 5> kSigmaConstant = {1, 1, 1, 1, 1};
// END CALIBRATED TABLES

constexpr double kLowerSafety = 0.9;
constexpr double kUpperSafety = 1.1;

std::size_t bracket(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("calibrated constant: s must lie in [0,1]");
  std::size_t i = 0;
  while (i + 2 < kGridS.size() && s > kGridS[i + 1]) ++i;
  return i;
}

double lookup_min(const std::array<double, 5>& table, double s) {
  const auto i = bracket(s);
  if (s == kGridS[i]) return table[i];
  if (s == kGridS[i + 1]) return table[i + 1];
  return kLowerSafety * std::min(table[i], table[i + 1]);
}

double lookup_max(const std::array<double, 5>& table, double s) {
  const auto i = bracket(s);
  if (s == kGridS[i]) return table[i];
  if (s == kGridS[i + 1]) return table[i + 1];
  return kUpperSafety * std::max(table[i], table[i + 1]);
}

constexpr std::int64_t kSieveLimit = 200'000;

const std::vector<bool>& squarefree_table() {
  static const std::vector<bool> table = [] {
    std::vector<bool> sf(kSieveLimit + 1, true);
    for (std::int64_t p = 2; p * p <= kSieveLimit; ++p)
      for (std::int64_t m = p * p; m <= kSieveLimit; m += p * p) sf[static_cast<std::size_t>(m)] = false;
    return sf;
  }();
  return table;
}

}  // namespace

double weight_lower_bound_constant(double s) { return lookup_min(kWeightConstant, s); }

double sigma_bound_constant(double s) { return lookup_max(kSigmaConstant, s); }

double sobolev_radius_constant(double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("sobolev_radius_constant: s must lie in (0,1)");
  // The certified tail R^{-s} (sum_{tail} ||k||^{2s} (alpha^2 + beta^2))^{1/2} never exceeds
  // R^{-s} ||f||_{F^s}, so C = 1 makes the certificate meet eps ||f||_{F^s}.
  return 1.0;
}

double barron_tail_constant(double s) {
  if (!(s >= 0.0 && s < 1.0)) throw DomainError("barron_tail_constant: s must lie in [0,1)");
  const auto& sf = squarefree_table();
  double sum = 0.0;
  for (std::int64_t n = kSieveLimit - (kSieveLimit % 2 == 0 ? 1 : 0); n >= 1; n -= 2)
    if (sf[static_cast<std::size_t>(n)]) sum += std::pow(static_cast<double>(n), s - 2.0);
  // Tail over all odd n > N: sum n^{s-2} <= N^{s-1} / (2 (1 - s)).
  sum += std::pow(static_cast<double>(kSieveLimit), s - 1.0) / (2.0 * (1.0 - s));
  return std::sqrt(2.0) * kMobiusPrefactor * sum;
}

}  // namespace reluriesz
