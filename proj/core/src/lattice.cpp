#include "reluriesz/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "reluriesz/errors.hpp"

namespace reluriesz {

namespace {

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("lattice count exceeds 64 bits");
  return out;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("lattice count exceeds 64 bits");
  return out;
}

void check_dim(int d) {
  if (d < 1) throw DimensionError("lattice: dimension must be at least 1");
}

class BallEnumerator {
 public:
  BallEnumerator(const BallSpec& spec, bool half, std::uint64_t cap)
      : spec_(spec), half_(half), cap_(cap), current_(static_cast<std::size_t>(spec.dim()), 0) {}

  std::vector<MultiIndex> run() {
    visit(0, spec_.max_norm_sq(), true);
    return std::move(out_);
  }

 private:
  void visit(std::size_t pos, std::int64_t remaining, bool prefix_zero) {
    const auto d = current_.size();
    const std::int64_t r = isqrt(remaining);
    // With an all-zero prefix only j >= 0 keeps the index positive-leading.
    const std::int64_t lo = (half_ && prefix_zero) ? 0 : -r;
    for (std::int64_t j = lo; j <= r; ++j) {
      current_[pos] = j;
      const bool zero = prefix_zero && j == 0;
      if (pos + 1 == d) {
        if (half_ && zero) continue;
        if (out_.size() >= cap_) {
          std::ostringstream os;
          os << "lattice enumeration exceeds cap of " << cap_ << " points (t=" << spec_.radius()
             << ", d=" << spec_.dim() << ", upper bound N <= " << upper_bound_N(spec_) << ")";
          throw SizeError(os.str());
        }
        out_.emplace_back(current_);
      } else {
        visit(pos + 1, remaining - j * j, zero);
      }
    }
    current_[pos] = 0;
  }

  const BallSpec& spec_;
  bool half_;
  std::uint64_t cap_;
  std::vector<std::int64_t> current_;
  std::vector<MultiIndex> out_;
};

void visit_shell(std::vector<std::int64_t>& cur, std::size_t pos, std::int64_t remaining, bool prefix_zero,
                 std::vector<MultiIndex>& out) {
  const auto d = cur.size();
  if (pos + 1 == d) {
    const std::int64_t r = isqrt(remaining);
    if (r * r != remaining) return;
    if (r == 0) {
      if (prefix_zero) return;
      cur[pos] = 0;
      out.emplace_back(cur);
      return;
    }
    if (!prefix_zero) {
      cur[pos] = -r;
      out.emplace_back(cur);
    }
    cur[pos] = r;
    out.emplace_back(cur);
    cur[pos] = 0;
    return;
  }
  const std::int64_t r = isqrt(remaining);
  const std::int64_t lo = prefix_zero ? 0 : -r;
  for (std::int64_t j = lo; j <= r; ++j) {
    cur[pos] = j;
    visit_shell(cur, pos + 1, remaining - j * j, prefix_zero && j == 0, out);
  }
  cur[pos] = 0;
}

std::uint64_t recursive_count(std::int64_t m, int d, std::map<std::pair<std::int64_t, int>, std::uint64_t>& memo) {
  if (m < 0) return 0;
  if (d == 1) return static_cast<std::uint64_t>(2 * isqrt(m) + 1);
  const auto key = std::make_pair(m, d);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  const std::int64_t r = isqrt(m);
  std::uint64_t total = recursive_count(m, d - 1, memo);
  for (std::int64_t j = 1; j <= r; ++j) total = checked_add(total, checked_mul(2, recursive_count(m - j * j, d - 1, memo)));
  memo.emplace(key, total);
  return total;
}

}  // namespace

BallSpec BallSpec::from_radius(double t, int d) {
  check_dim(d);
  if (!std::isfinite(t) || t < 0.0) throw DomainError("BallSpec: radius must be finite and nonnegative");
  BallSpec spec;
  spec.dim_ = d;
  spec.radius_ = t;
  const double t2 = t * t;
  if (t2 > 9.0e18) throw DomainError("BallSpec: radius too large");
  const double nearest = std::round(t2);
  if (std::abs(t2 - nearest) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t2)) {
    spec.radius_sq_ = nearest;
    spec.max_norm_sq_ = static_cast<std::int64_t>(nearest);
    spec.squared_exact_ = true;
  } else {
    spec.radius_sq_ = t2;
    spec.max_norm_sq_ = static_cast<std::int64_t>(std::floor(t2));
  }
  return spec;
}

BallSpec BallSpec::from_squared_radius(std::int64_t t_sq, int d) {
  check_dim(d);
  if (t_sq < 0) throw DomainError("BallSpec: squared radius must be nonnegative");
  BallSpec spec;
  spec.dim_ = d;
  spec.radius_sq_ = static_cast<double>(t_sq);
  spec.radius_ = std::sqrt(spec.radius_sq_);
  spec.max_norm_sq_ = t_sq;
  spec.squared_exact_ = true;
  return spec;
}

bool BallSpec::contains(const MultiIndex& k) const {
  if (static_cast<int>(k.dim()) != dim_) throw DimensionError("BallSpec::contains: dimension mismatch");
  return k.norm2_sq() <= max_norm_sq_;
}

std::vector<MultiIndex> enumerate_ball(const BallSpec& spec, const EnumerationLimits& limits) {
  return BallEnumerator(spec, false, limits.max_points).run();
}

std::vector<MultiIndex> enumerate_half_ball(const BallSpec& spec, const EnumerationLimits& limits) {
  return BallEnumerator(spec, true, limits.max_points).run();
}

std::vector<MultiIndex> enumerate_half_shell(std::int64_t q, int d) {
  check_dim(d);
  std::vector<MultiIndex> out;
  if (q <= 0) return out;
  std::vector<std::int64_t> cur(static_cast<std::size_t>(d), 0);
  visit_shell(cur, 0, q, true, out);
  return out;
}

std::vector<std::uint64_t> shell_counts(std::int64_t max_norm_sq, int d) {
  check_dim(d);
  if (max_norm_sq < 0) return {};
  const auto size = static_cast<std::size_t>(max_norm_sq) + 1;
  std::vector<std::uint64_t> counts(size, 0);
  counts[0] = 1;
  std::vector<std::uint64_t> next(size);
  const std::int64_t r = isqrt(max_norm_sq);
  for (int dim = 1; dim <= d; ++dim) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t q = 0; q < size; ++q) {
      if (counts[q] == 0) continue;
      next[q] = checked_add(next[q], counts[q]);
      for (std::int64_t j = 1; j <= r; ++j) {
        const auto target = q + static_cast<std::size_t>(j * j);
        if (target >= size) break;
        next[target] = checked_add(next[target], checked_mul(2, counts[q]));
      }
    }
    counts.swap(next);
  }
  return counts;
}

std::uint64_t count_ball(const BallSpec& spec) {
  std::uint64_t total = 0;
  for (auto c : shell_counts(spec.max_norm_sq(), spec.dim())) total = checked_add(total, c);
  return total;
}

std::uint64_t count_ball_recursive(const BallSpec& spec) {
  std::map<std::pair<std::int64_t, int>, std::uint64_t> memo;
  return recursive_count(spec.max_norm_sq(), spec.dim(), memo);
}

double log_bound_large_radius(const BallSpec& spec, const LatticeConstants& c) {
  const double d = spec.dim();
  return d * std::log(c.c1 * spec.radius() / std::sqrt(d));
}

double log_bound_small_radius(const BallSpec& spec, const LatticeConstants& c) {
  const double t2 = spec.radius_sq();
  return t2 * std::log(c.c2 * spec.dim() / t2);
}

double bound_large_radius(const BallSpec& spec, const LatticeConstants& c) {
  return std::exp(log_bound_large_radius(spec, c));
}

double bound_small_radius(const BallSpec& spec, const LatticeConstants& c) {
  return std::exp(log_bound_small_radius(spec, c));
}

double upper_bound_N(const BallSpec& spec, const LatticeConstants& c) {
  if (spec.radius() <= 0.0) throw DomainError("upper_bound_N: radius must be positive");
  const double t2 = spec.radius_sq();
  // Regime test on squares: t >= sqrt(d)/2  <=>  4 t^2 >= d.
  if (4.0 * t2 >= spec.dim()) return bound_large_radius(spec, c);
  return bound_small_radius(spec, c);
}

std::vector<WeightedIndex> weight_rearrangement(std::uint64_t n, int d, double s, const EnumerationLimits& limits) {
  check_dim(d);
  if (n > limits.max_points) throw SizeError("weight_rearrangement: n exceeds cap of " + std::to_string(limits.max_points));
  std::vector<WeightedIndex> out;
  out.reserve(n);
  for (std::int64_t q = 1; out.size() < n; ++q) {
    const double w = std::pow(static_cast<double>(q), s / 2.0);
    for (auto& k : enumerate_half_shell(q, d)) {
      if (out.size() == n) break;
      out.push_back({w, std::move(k)});
    }
  }
  return out;
}

double weight_partial_sum(std::uint64_t l, int d, double s) {
  check_dim(d);
  std::int64_t m = 1;
  std::vector<std::uint64_t> counts;
  for (;;) {
    counts = shell_counts(m, d);
    std::uint64_t half = 0;
    for (std::size_t q = 1; q < counts.size(); ++q) half = checked_add(half, counts[q] / 2);
    if (half >= l) break;
    m *= 2;
  }
  double total = 0.0;
  std::uint64_t remaining = l;
  for (std::size_t q = 1; q < counts.size() && remaining > 0; ++q) {
    const std::uint64_t take = std::min<std::uint64_t>(remaining, counts[q] / 2);
    total += static_cast<double>(take) * std::pow(static_cast<double>(q), s / 2.0);
    remaining -= take;
  }
  return total;
}

double lower_bound_W(double l, int d, double s, const LatticeConstants& c) {
  check_dim(d);
  if (!(l >= 1.0)) throw DomainError("lower_bound_W: l must be at least 1");
  const double small = c.c2 * d;
  if (l <= small) return l;
  const double large = std::pow(c.c1 / 2.0, d);
  if (l <= large) return (1.0 - s / 2.0) * l * std::pow(std::log(l) / std::log(small), s / 2.0);
  return weight_lower_bound_constant(s) * std::pow(static_cast<double>(d), s / 2.0) * std::pow(l, s / d + 1.0);
}

}  // namespace reluriesz
