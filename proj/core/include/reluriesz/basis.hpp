#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace reluriesz {

/// Integer frequency vector k in Z^d.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::int64_t> entries);
  MultiIndex(std::initializer_list<std::int64_t> entries);

  std::size_t dim() const { return entries_.size(); }
  std::int64_t operator[](std::size_t i) const { return entries_[i]; }
  std::span<const std::int64_t> entries() const { return entries_; }

  bool is_zero() const;
  /// Exact ||k||_1; throws std::overflow_error if it does not fit.
  std::int64_t norm1() const;
  /// Exact ||k||_2^2; throws std::overflow_error if it does not fit.
  std::int64_t norm2_sq() const;
  double norm2() const;

  MultiIndex scaled(std::int64_t factor) const;
  MultiIndex operator-() const;

  std::string to_string() const;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<std::int64_t> entries_;
};

enum class BasisKind { Const, Cos, Sin };

/// One element of the system {1} u {C_k, S_k : k > 0}. The constant carries
/// an empty index.
struct BasisId {
  BasisKind kind = BasisKind::Const;
  MultiIndex index;

  static BasisId constant() { return {}; }
  static BasisId cos(MultiIndex k);
  static BasisId sin(MultiIndex k);

  std::string to_string() const;

  friend auto operator<=>(const BasisId&, const BasisId&) = default;
  friend bool operator==(const BasisId&, const BasisId&) = default;
};

std::string kind_name(BasisKind kind);
BasisKind parse_kind(const std::string& name);

/// True iff k != 0 and the first nonzero entry of k is positive.
bool is_positive_leading(const MultiIndex& k);

/// k . x, accumulated with compensated summation when d > 8.
double dot(const MultiIndex& k, std::span<const double> x);

/// The periodic generators: C(t) = 4|frac(t) - 1/2| - 1 and S(t) = C(t + 3/4).
double eval_scalar(BasisKind kind, double t);

double eval_basis(const BasisId& id, std::span<const double> x);

/// 1 for the constant, 3^{-1/2} for every C_k and S_k.
double basis_l2_norm(const BasisId& id);

}  // namespace reluriesz
