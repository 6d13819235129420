#include "reluriesz/basis.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "reluriesz/errors.hpp"

namespace reluriesz {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("MultiIndex: 64-bit overflow");
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("MultiIndex: 64-bit overflow");
  return out;
}

double cos_generator(double t) {
  const double u = t - std::floor(t);
  return 4.0 * std::abs(u - 0.5) - 1.0;
}

}  // namespace

MultiIndex::MultiIndex(std::vector<std::int64_t> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw DimensionError("MultiIndex: dimension must be at least 1");
}

MultiIndex::MultiIndex(std::initializer_list<std::int64_t> entries)
    : MultiIndex(std::vector<std::int64_t>(entries)) {}

bool MultiIndex::is_zero() const {
  for (auto e : entries_)
    if (e != 0) return false;
  return true;
}

std::int64_t MultiIndex::norm1() const {
  std::int64_t s = 0;
  for (auto e : entries_) {
    if (e == INT64_MIN) throw std::overflow_error("MultiIndex: 64-bit overflow");
    s = checked_add(s, e < 0 ? -e : e);
  }
  return s;
}

std::int64_t MultiIndex::norm2_sq() const {
  std::int64_t s = 0;
  for (auto e : entries_) s = checked_add(s, checked_mul(e, e));
  return s;
}

double MultiIndex::norm2() const { return std::sqrt(static_cast<double>(norm2_sq())); }

MultiIndex MultiIndex::scaled(std::int64_t factor) const {
  std::vector<std::int64_t> out(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) out[i] = checked_mul(entries_[i], factor);
  return MultiIndex(std::move(out));
}

MultiIndex MultiIndex::operator-() const { return scaled(-1); }

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < entries_.size(); ++i) os << (i ? "," : "") << entries_[i];
  os << ')';
  return os.str();
}

BasisId BasisId::cos(MultiIndex k) {
  if (!is_positive_leading(k)) throw DomainError("BasisId: index " + k.to_string() + " is not positive-leading");
  return {BasisKind::Cos, std::move(k)};
}

BasisId BasisId::sin(MultiIndex k) {
  if (!is_positive_leading(k)) throw DomainError("BasisId: index " + k.to_string() + " is not positive-leading");
  return {BasisKind::Sin, std::move(k)};
}

std::string BasisId::to_string() const {
  if (kind == BasisKind::Const) return "1";
  return (kind == BasisKind::Cos ? "C" : "S") + index.to_string();
}

std::string kind_name(BasisKind kind) {
  switch (kind) {
    case BasisKind::Const: return "const";
    case BasisKind::Cos: return "cos";
    case BasisKind::Sin: return "sin";
  }
  return "?";
}

BasisKind parse_kind(const std::string& name) {
  if (name == "const") return BasisKind::Const;
  if (name == "cos" || name == "C") return BasisKind::Cos;
  if (name == "sin" || name == "S") return BasisKind::Sin;
  throw UsageError("unknown basis kind '" + name + "'");
}

bool is_positive_leading(const MultiIndex& k) {
  for (auto e : k.entries())
    if (e != 0) return e > 0;
  return false;
}

double dot(const MultiIndex& k, std::span<const double> x) {
  if (k.dim() != x.size())
    throw DimensionError("dot: index has dimension " + std::to_string(k.dim()) + ", point has " +
                         std::to_string(x.size()));
  if (k.dim() <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<double>(k[i]) * x[i];
    return s;
  }
  // Neumaier summation; the products themselves are rounded once each.
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double term = static_cast<double>(k[i]) * x[i];
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double eval_scalar(BasisKind kind, double t) {
  if (!std::isfinite(t)) throw DomainError("eval_scalar: argument is not finite");
  switch (kind) {
    case BasisKind::Cos: return cos_generator(t);
    case BasisKind::Sin: return cos_generator(t + 0.75);
    case BasisKind::Const: break;
  }
  throw DomainError("eval_scalar: kind must be Cos or Sin");
}

double eval_basis(const BasisId& id, std::span<const double> x) {
  if (id.kind == BasisKind::Const) return 1.0;
  return eval_scalar(id.kind, dot(id.index, x));
}

double basis_l2_norm(const BasisId& id) {
  return id.kind == BasisKind::Const ? 1.0 : 1.0 / std::sqrt(3.0);
}

}  // namespace reluriesz
