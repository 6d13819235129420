#pragma once

#include <cstdint>
#include <vector>

#include "reluriesz/basis.hpp"
#include "reluriesz/constants.hpp"

namespace reluriesz {

/// Euclidean ball of radius t in Z^d. Membership is decided by the exact
/// integer comparison ||k||_2^2 <= floor(t^2).
class BallSpec {
 public:
  /// A radius whose square lies within a few ulps of an integer is snapped
  /// to that integer, so from_radius(sqrt(2), d) contains (1,1,0,...).
  static BallSpec from_radius(double t, int d);
  static BallSpec from_squared_radius(std::int64_t t_sq, int d);

  double radius() const { return radius_; }
  double radius_sq() const { return radius_sq_; }
  int dim() const { return dim_; }
  std::int64_t max_norm_sq() const { return max_norm_sq_; }
  bool squared_exact() const { return squared_exact_; }
  bool contains(const MultiIndex& k) const;

 private:
  BallSpec() = default;
  double radius_ = 0.0;
  double radius_sq_ = 0.0;
  int dim_ = 1;
  std::int64_t max_norm_sq_ = 0;
  bool squared_exact_ = false;
};

struct EnumerationLimits {
  std::uint64_t max_points = 10'000'000;
};

/// All k with ||k||_2 <= t, lexicographic order (most significant first).
std::vector<MultiIndex> enumerate_ball(const BallSpec& spec, const EnumerationLimits& limits = {});
/// The positive-leading subset of enumerate_ball, same order.
std::vector<MultiIndex> enumerate_half_ball(const BallSpec& spec, const EnumerationLimits& limits = {});
/// Positive-leading k with ||k||_2^2 == q exactly, lexicographic order.
std::vector<MultiIndex> enumerate_half_shell(std::int64_t q, int d);

/// r_d(q) = #{k in Z^d : ||k||_2^2 = q} for q = 0..max_norm_sq.
std::vector<std::uint64_t> shell_counts(std::int64_t max_norm_sq, int d);

/// N(t,d) from the squared-norm histogram; never materializes points.
std::uint64_t count_ball(const BallSpec& spec);
/// N(t,d) from the slicing recursion N(t,d) = sum_j N(sqrt(t^2 - j^2), d-1).
std::uint64_t count_ball_recursive(const BallSpec& spec);

double log_bound_large_radius(const BallSpec& spec, const LatticeConstants& c = {});
double log_bound_small_radius(const BallSpec& spec, const LatticeConstants& c = {});
/// (c1 t / sqrt d)^d and (c2 d / t^2)^{t^2}; may overflow to +inf.
double bound_large_radius(const BallSpec& spec, const LatticeConstants& c = {});
double bound_small_radius(const BallSpec& spec, const LatticeConstants& c = {});
/// Picks the large-radius bound when t >= sqrt(d)/2, else the small-radius one.
double upper_bound_N(const BallSpec& spec, const LatticeConstants& c = {});

struct WeightedIndex {
  double weight;
  MultiIndex index;
};

/// The n smallest weights ||k||_2^s over positive-leading k, nondecreasing,
/// ties broken lexicographically, generated shell by shell.
std::vector<WeightedIndex> weight_rearrangement(std::uint64_t n, int d, double s,
                                                const EnumerationLimits& limits = {});
/// Sum of the first l entries of weight_rearrangement, computed from shell counts.
double weight_partial_sum(std::uint64_t l, int d, double s);
/// Lower bound for weight_partial_sum in three regimes split at c2*d and (c1/2)^d.
double lower_bound_W(double l, int d, double s, const LatticeConstants& c = {});

}  // namespace reluriesz
