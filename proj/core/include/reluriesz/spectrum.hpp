#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "reluriesz/basis.hpp"
#include "reluriesz/constants.hpp"

namespace reluriesz {

/// A pair of coefficients attached to one positive-leading index: (b, b') for
/// cos/sin modes, (alpha, beta) for C/S generators.
struct CoeffPair {
  double c = 0.0;
  double s = 0.0;
  friend bool operator==(const CoeffPair&, const CoeffPair&) = default;
};

using TermMap = std::map<MultiIndex, CoeffPair>;

/// Shared storage of a finitely supported expansion in d variables.
struct CoeffSeries {
  int dim = 1;
  double constant = 0.0;
  TermMap terms;

  /// Adds (c, s) to the entry at k; k must be positive-leading of dimension dim.
  void add(const MultiIndex& k, double c, double s);
  /// Drops entries whose two coefficients are both exactly zero.
  void prune();
  /// sum |c| + |s| over all terms, constant excluded.
  double l1_mass() const;
  /// Throws DimensionError / DomainError / ValidationError on broken invariants.
  void validate() const;

  friend bool operator==(const CoeffSeries&, const CoeffSeries&) = default;
};

/// f(x) = a0 + sum_m b_m cos(2 pi m.x) + b'_m sin(2 pi m.x), m positive-leading.
/// In terms of complex coefficients, b_m = a_m + a_{-m} and b'_m = i(a_m - a_{-m}).
struct FourierCoeffs : CoeffSeries {
  FourierCoeffs() = default;
  explicit FourierCoeffs(int d, double a0 = 0.0) : CoeffSeries{d, a0, {}} {}
  double a0() const { return constant; }
};

/// f(x) = alpha0 + sum_k alpha_k C_k(x) + beta_k S_k(x), k positive-leading.
struct RieszCoeffs : CoeffSeries {
  RieszCoeffs() = default;
  explicit RieszCoeffs(int d, double alpha0 = 0.0) : CoeffSeries{d, alpha0, {}} {}
  double alpha0() const { return constant; }
};

/// Pointwise evaluation of the represented functions.
double evaluate(const FourierCoeffs& f, std::span<const double> x);
double evaluate(const RieszCoeffs& f, std::span<const double> x);

/// a*u + b*v with coefficientwise arithmetic; zero entries are pruned.
RieszCoeffs linear_combination(double a, const RieszCoeffs& u, double b, const RieszCoeffs& v);

/// Moebius function by trial division. n = 0 is a domain error.
int mobius(std::int64_t n);

/// Coefficient of cos(2 pi p t) in C(t) (kind Cos) or of sin(2 pi p t) in S(t)
/// (kind Sin). Zero for even p.
double generator_fourier_coefficient(BasisKind kind, std::int64_t p);

template <class Coeffs>
struct Transformed {
  Coeffs coeffs;
  /// Sup-norm bound on the dropped part of the expansion.
  double tail_bound = 0.0;
};

/// Expands each cos/sin mode into generators C/S at odd multiples (2l+1)m for l <= L.
Transformed<RieszCoeffs> fourier_to_riesz(const FourierCoeffs& f, int L = kDefaultMobiusTruncation);
/// Expands each C_k/S_k into its Fourier series over odd harmonics p <= P.
Transformed<FourierCoeffs> riesz_to_fourier(const RieszCoeffs& g, int P = kDefaultHarmonicCap);

enum class NormSpace { Ws, Fs, Bs, BsSeq };

NormSpace parse_norm_space(const std::string& name);
std::string norm_space_name(NormSpace space);

/// sqrt(a0^2 + sum ||m||^{2s} (b^2 + b'^2) / 2)
double norm_ws(const FourierCoeffs& f, double s);
/// |a0| + sum ||m||^s sqrt(b^2 + b'^2)
double norm_bs(const FourierCoeffs& f, double s);
/// sqrt(alpha0^2 + sum ||k||^{2s} (alpha^2 + beta^2))
double norm_fs(const RieszCoeffs& g, double s);
/// |alpha0| + sum ||k||^s (|alpha| + |beta|); any s >= 0 is accepted.
double norm_bs_seq(const RieszCoeffs& g, double s);

/// Dispatch by space; a container/space mismatch is a UsageError.
double norm(NormSpace space, double s, const FourierCoeffs& f);
double norm(NormSpace space, double s, const RieszCoeffs& g);

/// Exact L2([0,1]^d) inner product of two basis functions.
double gram_entry(const BasisId& a, const BasisId& b);

struct GramMatrix {
  std::vector<BasisId> ids;
  Eigen::MatrixXd entries;
};

GramMatrix gram_matrix(const std::vector<BasisId>& ids);

/// Exact L2 inner products of the represented functions.
double l2_inner(const RieszCoeffs& u, const RieszCoeffs& v);
double l2_inner(const FourierCoeffs& u, const FourierCoeffs& v);
double l2_inner(const FourierCoeffs& u, const RieszCoeffs& v);
double l2_norm(const RieszCoeffs& u);
double l2_norm(const FourierCoeffs& u);

/// gcd of |k_i| and k / gcd; the primitive vector is positive-leading when k is.
std::pair<std::int64_t, MultiIndex> primitive_split(const MultiIndex& k);

struct RandomSpec {
  int dim = 1;
  double s = 0.5;
  double support_radius = 4.0;
  /// Keep only this many randomly chosen indices.
  std::optional<std::uint64_t> sparsity;
  /// Extra factor ||k||^{-decay} on every drawn coefficient.
  double decay = 0.0;
  std::uint64_t seed = 0;
};

/// Gaussian coefficients on the half ball, rescaled to unit Ws or Bs norm.
FourierCoeffs random_unit_ball(NormSpace space, const RandomSpec& spec);
/// Same for generator coefficients, rescaled to unit Fs or BsSeq norm.
RieszCoeffs random_unit_ball_riesz(NormSpace space, const RandomSpec& spec);

}  // namespace reluriesz
