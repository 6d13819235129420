#include "reluriesz/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reluriesz/errors.hpp"
#include "reluriesz/lattice.hpp"
#include "reluriesz/rng.hpp"

namespace reluriesz {

namespace {

void check_open_unit(double s, const char* what) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError(std::string(what) + ": s must lie in (0,1)");
}

struct Entry {
  MultiIndex k;
  bool sine;
  double value;
};

// Ordering of best_n_term: larger |value| first, then lexicographic k, alpha before beta.
std::vector<Entry> ranked_entries(const RieszCoeffs& c) {
  std::vector<Entry> out;
  for (const auto& [k, cp] : c.terms) {
    if (cp.c != 0.0) out.push_back({k, false, cp.c});
    if (cp.s != 0.0) out.push_back({k, true, cp.s});
  }
  std::stable_sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    const double fa = std::abs(a.value);
    const double fb = std::abs(b.value);
    if (fa != fb) return fa > fb;
    if (a.k != b.k) return a.k < b.k;
    return !a.sine && b.sine;
  });
  return out;
}

double mixed_distance(const FourierCoeffs& f, const RieszCoeffs& g) {
  const double sq = l2_inner(f, f) - 2.0 * l2_inner(f, g) + l2_inner(g, g);
  return std::sqrt(std::max(0.0, sq));
}

void fill_structure(ApproxReport& r, const ReluNetwork& net, int d) {
  r.width = net.width();
  r.depth = net.depth();
  r.params_total = param_count(static_cast<std::uint64_t>(r.width), static_cast<std::uint64_t>(r.depth),
                               static_cast<std::uint64_t>(d));
  r.params_nonzero = nonzero_params(net);
  // Depth bound 4 + log2(R sqrt(min(R, d))) and, for stacked nets, width <= 4 N(R, d).
  if (r.radius >= 1.0) {
    const double bound = 4.0 + std::log2(r.radius * std::sqrt(std::min(r.radius, static_cast<double>(d))));
    r.depth_bound_ok = r.depth <= bound;
  }
  if (r.architecture == Architecture::Inline) {
    r.width_bound_ok = r.width <= d + 3;
  } else {
    const auto spec = BallSpec::from_radius(r.radius, d);
    if (spec.max_norm_sq() <= 4'000'000) r.width_bound_ok = r.width <= static_cast<double>(4 * count_ball(spec));
  }
}

Truncation split_at_radius(const RieszCoeffs& c, double R, double s) {
  if (!(R > 0.0)) throw DomainError("truncate_radius: R must be positive");
  if (!(s >= 0.0)) throw DomainError("truncate_radius: s must be nonnegative");
  const auto spec = BallSpec::from_radius(R, c.dim);
  Truncation out{RieszCoeffs(c.dim, c.constant), RieszCoeffs(c.dim, 0.0), 0.0, 0.0};
  double weighted = 0.0;
  for (const auto& [k, cp] : c.terms) {
    const auto q = k.norm2_sq();
    if (q <= spec.max_norm_sq()) {
      out.head.terms.emplace(k, cp);
    } else {
      out.tail.terms.emplace(k, cp);
      weighted += std::pow(static_cast<double>(q), s) * (cp.c * cp.c + cp.s * cp.s);
    }
  }
  out.tail_l2_bound = std::pow(R, -s) * std::sqrt(weighted);
  return out;
}

struct Head {
  RieszCoeffs coeffs;
  double conversion_tail = 0.0;
};

ApproxResult sobolev_from_riesz(const RieszCoeffs& c, double s, double eps, Architecture arch, const ApproxOptions& options,
                                const FourierCoeffs* original) {
  check_open_unit(s, "approximate_sobolev");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("approximate_sobolev: eps must lie in (0,1)");
  const double C = options.radius_constant.value_or(sobolev_radius_constant(s));
  const double R = options.radius.value_or(radius_for_eps(s, eps, C));
  // The tail's exact norm costs a Gram pass over the whole tail; skip it when the Fourier input gives the error directly.
  auto trunc = original ? split_at_radius(c, R, s) : truncate_radius(c, R, s);
  ReluNetwork net = build_network(trunc.head, arch);

  ApproxReport r;
  r.pipeline = "sobolev";
  r.architecture = arch;
  r.s = s;
  r.epsilon_target = eps;
  r.radius = R;
  r.n_terms = trunc.head.terms.size();
  r.error_bound_certified = trunc.tail_l2_bound;
  if (original) {
    r.norm_space = "Ws";
    r.input_norm = norm_ws(*original, s);
    r.error_l2_exact = mixed_distance(*original, trunc.head);
  } else {
    r.norm_space = "Fs";
    r.input_norm = norm_fs(c, s);
    r.error_l2_exact = trunc.tail_l2_exact;
  }
  r.target_met = r.error_bound_certified <= eps * r.input_norm;
  fill_structure(r, net, c.dim);
  return {std::move(net), std::move(trunc.head), std::move(r)};
}

ApproxResult barron_from_riesz(const RieszCoeffs& c, double s, double eps, Architecture arch, const ApproxOptions& options,
                               const FourierCoeffs* original, double conversion_tail) {
  check_open_unit(s, "approximate_barron");
  if (!(eps > 0.0)) throw DomainError("approximate_barron: eps must be positive");
  const double C = options.radius_constant.value_or(1.0);
  const double R = options.radius.value_or(radius_for_eps(s, eps, C));
  auto trunc = split_at_radius(c, R, s);

  double tail_sq = 0.0;
  for (const auto& [k, cp] : trunc.tail.terms) tail_sq += cp.c * cp.c + cp.s * cp.s;
  const double input_norm = original ? norm_bs(*original, s) : norm_bs_seq(c, s);
  const double budget = eps * input_norm;

  // Smallest n whose certificate conversion + sqrt(1/2) ||(tail, dropped head)||_2 meets the budget.
  const auto ranked = ranked_entries(trunc.head);
  std::vector<double> suffix(ranked.size() + 1, 0.0);
  for (std::size_t i = ranked.size(); i-- > 0;) suffix[i] = suffix[i + 1] + ranked[i].value * ranked[i].value;
  auto certificate = [&](std::size_t n) { return conversion_tail + std::sqrt(kRieszUpper * (tail_sq + suffix[n])); };
  std::size_t n = 0;
  while (n < ranked.size() && certificate(n) > budget) ++n;

  auto sel = best_n_term(trunc.head, n);
  ReluNetwork net = build_network(sel.selected, arch);

  ApproxReport r;
  r.pipeline = "barron";
  r.architecture = arch;
  r.s = s;
  r.epsilon_target = eps;
  r.radius = R;
  r.norm_space = original ? "Bs" : "BsSeq";
  r.input_norm = input_norm;
  r.n_terms = n;
  r.sigma_n = sel.sigma;
  r.sigma_class_bound = n >= 1 ? sigma_upper_bound(n, c.dim, s) : std::numeric_limits<double>::infinity();
  r.conversion_tail = conversion_tail;
  r.error_bound_certified = certificate(n);
  r.error_l2_exact = original ? mixed_distance(*original, sel.selected) : l2_norm(linear_combination(1.0, c, -1.0, sel.selected));
  r.target_met = r.error_bound_certified <= budget;
  fill_structure(r, net, c.dim);
  if (arch == Architecture::Stacked) r.width_bound_ok = r.width <= static_cast<int>(4 * std::max<std::size_t>(n, 1));
  return {std::move(net), std::move(sel.selected), std::move(r)};
}

}  // namespace

double radius_for_eps(double s, double eps, double C) {
  if (!(s > 0.0) || !(eps > 0.0) || !(C > 0.0)) throw DomainError("radius_for_eps: s, eps and C must be positive");
  return std::pow(C / eps, 1.0 / s);
}

Truncation truncate_radius(const RieszCoeffs& c, double R, double s) {
  auto out = split_at_radius(c, R, s);
  out.tail_l2_exact = l2_norm(out.tail);
  return out;
}

NTermSelection best_n_term(const RieszCoeffs& c, std::size_t n) {
  const auto ranked = ranked_entries(c);
  NTermSelection out{RieszCoeffs(c.dim, c.constant), 0.0, {}};
  double rest = 0.0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& e = ranked[i];
    if (i < n) {
      out.selected.add(e.k, e.sine ? 0.0 : e.value, e.sine ? e.value : 0.0);
      out.order.push_back(e.sine ? BasisId::sin(e.k) : BasisId::cos(e.k));
    } else {
      rest += e.value * e.value;
    }
  }
  out.sigma = std::sqrt(rest);
  return out;
}

double sigma_upper_bound(std::uint64_t n, int d, double s, const LatticeConstants& c) {
  if (n < 1) throw DomainError("sigma_upper_bound: n must be at least 1");
  if (d < 1) throw DimensionError("sigma_upper_bound: dimension must be at least 1");
  if (!(s >= 0.0 && s < 1.0)) throw DomainError("sigma_upper_bound: s must lie in [0,1)");
  const double nd = static_cast<double>(n);
  if (d == 1) return (s + 1.0) / std::sqrt(2.0 * s + 1.0) * std::pow(nd, -s - 0.5);
  const double dd = d;
  const double small = c.c2 * dd;
  double shape;
  if (nd <= small) {
    shape = 1.0 / nd;
  } else if (nd <= std::pow(c.c1 / 2.0, dd)) {
    shape = std::pow(std::log(small) / std::log(nd), s) / nd;
  } else {
    shape = std::pow(dd, -s) * std::pow(nd, -2.0 * s / dd - 1.0);
  }
  return std::sqrt(sigma_bound_constant(s) * shape);
}

ApproxResult approximate_sobolev(const RieszCoeffs& c, double s, double eps, Architecture arch, const ApproxOptions& options) {
  c.validate();
  return sobolev_from_riesz(c, s, eps, arch, options, nullptr);
}

ApproxResult approximate_sobolev(const FourierCoeffs& f, double s, double eps, Architecture arch, const ApproxOptions& options) {
  const auto conv = fourier_to_riesz(f, options.mobius_truncation);
  auto result = sobolev_from_riesz(conv.coeffs, s, eps, arch, options, &f);
  result.report.conversion_tail = conv.tail_bound;
  result.report.error_bound_certified += conv.tail_bound;
  result.report.target_met = result.report.error_bound_certified <= eps * result.report.input_norm;
  return result;
}

ApproxResult approximate_barron(const RieszCoeffs& c, double s, double eps, Architecture arch, const ApproxOptions& options) {
  c.validate();
  return barron_from_riesz(c, s, eps, arch, options, nullptr, 0.0);
}

ApproxResult approximate_barron(const FourierCoeffs& f, double s, double eps, Architecture arch, const ApproxOptions& options) {
  const auto conv = fourier_to_riesz(f, options.mobius_truncation);
  return barron_from_riesz(conv.coeffs, s, eps, arch, options, &f, conv.tail_bound);
}

LpEstimate lp_norm_mc(const std::function<double(std::span<const double>)>& g, int d, double p, std::size_t n_samples,
                      std::uint64_t seed) {
  if (!(p >= 2.0)) throw DomainError("lp_norm_mc: p must be at least 2");
  if (n_samples < 2) throw UsageError("lp_norm_mc: need at least two samples");
  LpEstimate out;
  out.p = p;
  out.n_samples = n_samples;
  Rng rng(derive_seed(seed, "lp_error_mc"));
  std::vector<double> x(static_cast<std::size_t>(d));
  const bool infinite = std::isinf(p);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    for (auto& v : x) v = rng.uniform();
    const double e = std::abs(g(x));
    if (infinite) {
      out.max_random = std::max(out.max_random, e);
    } else {
      const double ep = std::pow(e, p);
      sum += ep;
      sum_sq += ep * ep;
    }
  }
  if (infinite) {
    for (std::size_t i = 0; i < n_samples; ++i) out.max_halton = std::max(out.max_halton, std::abs(g(halton_point(i, d))));
    out.value = std::max(out.max_random, out.max_halton);
    return out;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  out.value = std::pow(mean, 1.0 / p);
  out.standard_error = mean > 0.0 ? out.value / (p * mean) * std::sqrt(var / n) : 0.0;
  return out;
}

std::vector<double> halton_point(std::uint64_t i, int d) {
  static constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                    59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};
  if (d < 1 || d > static_cast<int>(std::size(kPrimes))) throw DimensionError("halton_point: unsupported dimension");
  std::vector<double> x(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const auto base = static_cast<std::uint64_t>(kPrimes[j]);
    double f = 1.0;
    double r = 0.0;
    for (std::uint64_t n = i + 1; n > 0; n /= base) {
      f /= static_cast<double>(base);
      r += f * static_cast<double>(n % base);
    }
    x[static_cast<std::size_t>(j)] = r;
  }
  return x;
}

namespace {

template <class Reference>
LpEstimate lp_error_impl(const Reference& reference, const ReluNetwork& net, double p, std::size_t n_samples, std::uint64_t seed) {
  if (net.dim_in() != reference.dim) throw DimensionError("lp_error_mc: dimension mismatch");
  return lp_norm_mc([&](std::span<const double> x) { return evaluate(reference, x) - net.eval(x); }, reference.dim, p,
                    n_samples, seed);
}

}  // namespace

LpEstimate lp_error_mc(const RieszCoeffs& reference, const ReluNetwork& net, double p, std::size_t n_samples, std::uint64_t seed) {
  return lp_error_impl(reference, net, p, n_samples, seed);
}

LpEstimate lp_error_mc(const FourierCoeffs& reference, const ReluNetwork& net, double p, std::size_t n_samples, std::uint64_t seed) {
  return lp_error_impl(reference, net, p, n_samples, seed);
}

}  // namespace reluriesz
