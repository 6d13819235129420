#include "reluriesz/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <unordered_map>

#include "reluriesz/errors.hpp"
#include "reluriesz/lattice.hpp"
#include "reluriesz/rng.hpp"

namespace reluriesz {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

void check_smoothness(double s, const char* what) {
  if (!(s >= 0.0 && s < 1.0)) throw DomainError(std::string(what) + ": s must lie in [0,1)");
}

void check_same_dim(int a, int b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": dimension mismatch");
}

double pow_norm(const MultiIndex& k, double s) {
  return std::pow(static_cast<double>(k.norm2_sq()), s / 2.0);
}

std::int64_t gcd_entries(const MultiIndex& k) {
  std::int64_t g = 0;
  for (auto v : k.entries()) g = std::gcd(g, v < 0 ? -v : v);
  return g;
}

// Terms grouped by primitive direction: direction -> list of (multiplier, coefficients).
using Buckets = std::map<MultiIndex, std::vector<std::pair<std::int64_t, CoeffPair>>>;

Buckets bucket_by_direction(const TermMap& terms) {
  Buckets out;
  for (const auto& [k, cp] : terms) {
    auto [g, e] = primitive_split(k);
    out[e].emplace_back(g, cp);
  }
  return out;
}

// <C(m t), C(m' t)> and <S(m t), S(m' t)> over one period; cc/ss are both
// zero unless m/g and m'/g are odd.
std::pair<double, double> parallel_gram(std::int64_t m, std::int64_t mp) {
  const std::int64_t g = std::gcd(m, mp);
  const std::int64_t a = m / g;
  const std::int64_t b = mp / g;
  if (a % 2 == 0 || b % 2 == 0) return {0.0, 0.0};
  const double ad = static_cast<double>(a);
  const double bd = static_cast<double>(b);
  const double cc = 1.0 / (3.0 * ad * ad * bd * bd);
  const double sign = (((a + b) / 2 - 1) % 2 == 0) ? 1.0 : -1.0;
  return {cc, sign * cc};
}

}  // namespace

void CoeffSeries::add(const MultiIndex& k, double c, double s) {
  if (static_cast<int>(k.dim()) != dim) throw DimensionError("coefficient index " + k.to_string() + " has wrong dimension");
  if (!is_positive_leading(k)) throw DomainError("coefficient index " + k.to_string() + " is not positive-leading");
  auto& cp = terms[k];
  cp.c += c;
  cp.s += s;
}

void CoeffSeries::prune() {
  std::erase_if(terms, [](const auto& kv) { return kv.second.c == 0.0 && kv.second.s == 0.0; });
}

double CoeffSeries::l1_mass() const {
  double total = 0.0;
  for (const auto& [k, cp] : terms) total += std::abs(cp.c) + std::abs(cp.s);
  return total;
}

void CoeffSeries::validate() const {
  if (dim < 1) throw DimensionError("coefficients: dimension must be at least 1");
  if (!std::isfinite(constant)) throw ValidationError("coefficients: constant term is not finite");
  for (const auto& [k, cp] : terms) {
    if (static_cast<int>(k.dim()) != dim) throw DimensionError("coefficient index " + k.to_string() + " has wrong dimension");
    if (!is_positive_leading(k)) throw DomainError("coefficient index " + k.to_string() + " is not positive-leading");
    if (!std::isfinite(cp.c) || !std::isfinite(cp.s))
      throw ValidationError("coefficient at " + k.to_string() + " is not finite");
  }
}

double evaluate(const FourierCoeffs& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.dim) throw DimensionError("evaluate: point dimension mismatch");
  double acc = f.constant;
  for (const auto& [m, cp] : f.terms) {
    const double t = dot(m, x);
    const double frac = t - std::floor(t);
    const double angle = 2.0 * std::numbers::pi * frac;
    acc += cp.c * std::cos(angle) + cp.s * std::sin(angle);
  }
  return acc;
}

double evaluate(const RieszCoeffs& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.dim) throw DimensionError("evaluate: point dimension mismatch");
  double acc = f.constant;
  for (const auto& [k, cp] : f.terms) {
    const double t = dot(k, x);
    if (cp.c != 0.0) acc += cp.c * eval_scalar(BasisKind::Cos, t);
    if (cp.s != 0.0) acc += cp.s * eval_scalar(BasisKind::Sin, t);
  }
  return acc;
}

RieszCoeffs linear_combination(double a, const RieszCoeffs& u, double b, const RieszCoeffs& v) {
  check_same_dim(u.dim, v.dim, "linear_combination");
  RieszCoeffs out(u.dim, a * u.constant + b * v.constant);
  for (const auto& [k, cp] : u.terms) out.add(k, a * cp.c, a * cp.s);
  for (const auto& [k, cp] : v.terms) out.add(k, b * cp.c, b * cp.s);
  out.prune();
  return out;
}

int mobius(std::int64_t n) {
  if (n < 1) throw DomainError("mobius: n must be positive");
  int result = 1;
  for (std::int64_t p = 2; p <= n / p; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

double generator_fourier_coefficient(BasisKind kind, std::int64_t p) {
  if (p < 1) throw DomainError("generator_fourier_coefficient: p must be positive");
  if (kind == BasisKind::Const) throw DomainError("generator_fourier_coefficient: kind must be cos or sin");
  if (p % 2 == 0) return 0.0;
  const double pd = static_cast<double>(p);
  const double base = 8.0 / (kPi2 * pd * pd);
  if (kind == BasisKind::Cos) return base;
  return ((p - 1) / 2) % 2 == 0 ? base : -base;
}

Transformed<RieszCoeffs> fourier_to_riesz(const FourierCoeffs& f, int L) {
  if (L < 0) throw DomainError("fourier_to_riesz: L must be nonnegative");
  f.validate();
  Transformed<RieszCoeffs> out{RieszCoeffs(f.dim, f.constant), 0.0};
  for (int l = 0; l <= L; ++l) {
    const std::int64_t q = 2 * l + 1;
    const int mu = mobius(q);
    if (mu == 0) continue;
    const double weight = kMobiusPrefactor * mu / static_cast<double>(q * q);
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    for (const auto& [m, cp] : f.terms) out.coeffs.add(m.scaled(q), weight * cp.c, sign * weight * cp.s);
  }
  out.coeffs.prune();
  out.tail_bound = kMobiusPrefactor * f.l1_mass() / (4.0 * L + 2.0);
  return out;
}

Transformed<FourierCoeffs> riesz_to_fourier(const RieszCoeffs& g, int P) {
  if (P < 1) throw DomainError("riesz_to_fourier: P must be at least 1");
  g.validate();
  Transformed<FourierCoeffs> out{FourierCoeffs(g.dim, g.constant), 0.0};
  for (std::int64_t p = 1; p <= P; p += 2) {
    const double cc = generator_fourier_coefficient(BasisKind::Cos, p);
    const double sc = generator_fourier_coefficient(BasisKind::Sin, p);
    for (const auto& [k, cp] : g.terms) out.coeffs.add(k.scaled(p), cp.c * cc, cp.s * sc);
  }
  out.coeffs.prune();
  // Sum over odd p >= q of p^{-2} <= 1 / (2 (q - 2)), q the first odd harmonic beyond P.
  const double q = static_cast<double>(P % 2 == 0 ? P + 1 : P + 2);
  out.tail_bound = g.l1_mass() * (8.0 / kPi2) / (2.0 * (q - 2.0));
  return out;
}

NormSpace parse_norm_space(const std::string& name) {
  if (name == "Ws" || name == "ws" || name == "W") return NormSpace::Ws;
  if (name == "Fs" || name == "fs" || name == "F") return NormSpace::Fs;
  if (name == "Bs" || name == "bs" || name == "B") return NormSpace::Bs;
  if (name == "BsSeq" || name == "bsseq" || name == "bs_seq") return NormSpace::BsSeq;
  throw UsageError("unknown norm space '" + name + "' (expected Ws, Fs, Bs or BsSeq)");
}

std::string norm_space_name(NormSpace space) {
  switch (space) {
    case NormSpace::Ws: return "Ws";
    case NormSpace::Fs: return "Fs";
    case NormSpace::Bs: return "Bs";
    case NormSpace::BsSeq: return "BsSeq";
  }
  return "?";
}

double norm_ws(const FourierCoeffs& f, double s) {
  check_smoothness(s, "norm_ws");
  double acc = f.constant * f.constant;
  for (const auto& [m, cp] : f.terms) acc += std::pow(static_cast<double>(m.norm2_sq()), s) * (cp.c * cp.c + cp.s * cp.s) / 2.0;
  return std::sqrt(acc);
}

double norm_bs(const FourierCoeffs& f, double s) {
  check_smoothness(s, "norm_bs");
  double acc = std::abs(f.constant);
  for (const auto& [m, cp] : f.terms) acc += pow_norm(m, s) * std::hypot(cp.c, cp.s);
  return acc;
}

double norm_fs(const RieszCoeffs& g, double s) {
  check_smoothness(s, "norm_fs");
  double acc = g.constant * g.constant;
  for (const auto& [k, cp] : g.terms) acc += std::pow(static_cast<double>(k.norm2_sq()), s) * (cp.c * cp.c + cp.s * cp.s);
  return std::sqrt(acc);
}

double norm_bs_seq(const RieszCoeffs& g, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("norm_bs_seq: s must be nonnegative");
  double acc = std::abs(g.constant);
  for (const auto& [k, cp] : g.terms) acc += pow_norm(k, s) * (std::abs(cp.c) + std::abs(cp.s));
  return acc;
}

double norm(NormSpace space, double s, const FourierCoeffs& f) {
  switch (space) {
    case NormSpace::Ws: return norm_ws(f, s);
    case NormSpace::Bs: return norm_bs(f, s);
    default: throw UsageError("norm " + norm_space_name(space) + " applies to generator coefficients, not Fourier coefficients");
  }
}

double norm(NormSpace space, double s, const RieszCoeffs& g) {
  switch (space) {
    case NormSpace::Fs: return norm_fs(g, s);
    case NormSpace::BsSeq: return norm_bs_seq(g, s);
    default: throw UsageError("norm " + norm_space_name(space) + " applies to Fourier coefficients, not generator coefficients");
  }
}

std::pair<std::int64_t, MultiIndex> primitive_split(const MultiIndex& k) {
  const std::int64_t g = gcd_entries(k);
  if (g == 0) throw DomainError("primitive_split: zero index");
  std::vector<std::int64_t> e(k.entries().begin(), k.entries().end());
  for (auto& v : e) v /= g;
  return {g, MultiIndex(std::move(e))};
}

double gram_entry(const BasisId& a, const BasisId& b) {
  const bool ac = a.kind == BasisKind::Const;
  const bool bc = b.kind == BasisKind::Const;
  if (ac || bc) return (ac && bc) ? 1.0 : 0.0;
  check_same_dim(static_cast<int>(a.index.dim()), static_cast<int>(b.index.dim()), "gram_entry");
  if (a.kind != b.kind) return 0.0;
  auto [ga, ea] = primitive_split(a.index);
  auto [gb, eb] = primitive_split(b.index);
  if (ea != eb) return 0.0;
  auto [cc, ss] = parallel_gram(ga, gb);
  return a.kind == BasisKind::Cos ? cc : ss;
}

GramMatrix gram_matrix(const std::vector<BasisId>& ids) {
  std::set<BasisId> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second) throw UsageError("gram_matrix: duplicate id " + id.to_string());
  const auto n = static_cast<Eigen::Index>(ids.size());
  GramMatrix out{ids, Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = gram_entry(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
      out.entries(i, j) = v;
      out.entries(j, i) = v;
    }
  return out;
}

double l2_inner(const RieszCoeffs& u, const RieszCoeffs& v) {
  check_same_dim(u.dim, v.dim, "l2_inner");
  double acc = u.constant * v.constant;
  const Buckets bu = bucket_by_direction(u.terms);
  const Buckets bv = bucket_by_direction(v.terms);
  for (const auto& [e, list_u] : bu) {
    auto it = bv.find(e);
    if (it == bv.end()) continue;
    for (const auto& [m, cu] : list_u)
      for (const auto& [mp, cv] : it->second) {
        auto [cc, ss] = parallel_gram(m, mp);
        acc += cc * cu.c * cv.c + ss * cu.s * cv.s;
      }
  }
  return acc;
}

double l2_inner(const FourierCoeffs& u, const FourierCoeffs& v) {
  check_same_dim(u.dim, v.dim, "l2_inner");
  double acc = u.constant * v.constant;
  for (const auto& [m, cu] : u.terms) {
    auto it = v.terms.find(m);
    if (it != v.terms.end()) acc += 0.5 * (cu.c * it->second.c + cu.s * it->second.s);
  }
  return acc;
}

double l2_inner(const FourierCoeffs& u, const RieszCoeffs& v) {
  check_same_dim(u.dim, v.dim, "l2_inner");
  double acc = u.constant * v.constant;
  // cos(2 pi m.x) meets C_k only when m = p k with p odd; the overlap is half
  // the p-th generator coefficient. Same for sin and S_k.
  for (const auto& [m, cu] : u.terms) {
    const std::int64_t g = gcd_entries(m);
    for (std::int64_t p = 1; p <= g; p += 2) {
      if (g % p != 0) continue;
      std::vector<std::int64_t> k(m.entries().begin(), m.entries().end());
      for (auto& x : k) x /= p;
      auto it = v.terms.find(MultiIndex(std::move(k)));
      if (it == v.terms.end()) continue;
      acc += 0.5 * (cu.c * it->second.c * generator_fourier_coefficient(BasisKind::Cos, p) +
                    cu.s * it->second.s * generator_fourier_coefficient(BasisKind::Sin, p));
    }
  }
  return acc;
}

double l2_norm(const RieszCoeffs& u) { return std::sqrt(std::max(0.0, l2_inner(u, u))); }

double l2_norm(const FourierCoeffs& u) { return std::sqrt(std::max(0.0, l2_inner(u, u))); }

namespace {

std::vector<MultiIndex> random_support(const RandomSpec& spec, Rng& rng) {
  if (!(spec.support_radius >= 1.0)) throw DomainError("random_unit_ball: support radius must be at least 1");
  auto support = enumerate_half_ball(BallSpec::from_radius(spec.support_radius, spec.dim));
  if (support.empty()) throw DomainError("random_unit_ball: empty support");
  if (spec.sparsity) {
    if (*spec.sparsity == 0) throw DomainError("random_unit_ball: sparsity must be positive");
    const auto keep = std::min<std::size_t>(*spec.sparsity, support.size());
    for (std::size_t i = 0; i < keep; ++i) {
      const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(support.size() - 1)));
      std::swap(support[i], support[j]);
    }
    support.resize(keep);
    std::sort(support.begin(), support.end());
  }
  return support;
}

template <class Coeffs>
Coeffs draw(const RandomSpec& spec, Rng& rng) {
  Coeffs out(spec.dim, 0.0);
  for (const auto& k : random_support(spec, rng)) {
    const double scale = spec.decay == 0.0 ? 1.0 : std::pow(static_cast<double>(k.norm2_sq()), -spec.decay / 2.0);
    const double c = rng.normal() * scale;
    const double s = rng.normal() * scale;
    out.add(k, c, s);
  }
  return out;
}

template <class Coeffs>
void rescale(Coeffs& c, double factor) {
  c.constant *= factor;
  for (auto& [k, cp] : c.terms) {
    cp.c *= factor;
    cp.s *= factor;
  }
}

}  // namespace

FourierCoeffs random_unit_ball(NormSpace space, const RandomSpec& spec) {
  if (space != NormSpace::Ws && space != NormSpace::Bs) throw UsageError("random_unit_ball: space must be Ws or Bs");
  Rng rng(derive_seed(spec.seed, "random_unit_ball/fourier"));
  auto f = draw<FourierCoeffs>(spec, rng);
  const double n = norm(space, spec.s, f);
  if (!(n > 0.0)) throw DomainError("random_unit_ball: degenerate draw");
  rescale(f, 1.0 / n);
  return f;
}

RieszCoeffs random_unit_ball_riesz(NormSpace space, const RandomSpec& spec) {
  if (space != NormSpace::Fs && space != NormSpace::BsSeq) throw UsageError("random_unit_ball_riesz: space must be Fs or BsSeq");
  Rng rng(derive_seed(spec.seed, "random_unit_ball/riesz"));
  auto g = draw<RieszCoeffs>(spec, rng);
  const double n = norm(space, spec.s, g);
  if (!(n > 0.0)) throw DomainError("random_unit_ball_riesz: degenerate draw");
  rescale(g, 1.0 / n);
  return g;
}

}  // namespace reluriesz
