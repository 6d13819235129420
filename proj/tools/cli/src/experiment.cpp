#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <thread>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "format.hpp"
#include "reluriesz/approx.hpp"
#include "reluriesz/errors.hpp"
#include "reluriesz/lattice.hpp"
#include "reluriesz/network.hpp"
#include "reluriesz/recovery.hpp"
#include "reluriesz/rng.hpp"
#include "reluriesz/spectrum.hpp"
#include "rrnet/cli.hpp"

namespace rrnet {

using json = nlohmann::json;
using namespace reluriesz;

namespace {

class Config {
 public:
  explicit Config(json j) : j_(std::move(j)) {
    if (!j_.is_object()) throw ValidationError("$: config must be a JSON object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  std::string str(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    if (!j_[key].is_string()) fail(key, "expected a string");
    return j_[key].get<std::string>();
  }

  double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    if (!j_[key].is_number()) fail(key, "expected a number");
    return j_[key].get<double>();
  }

  std::optional<double> opt_number(const char* key) const {
    if (!has(key) || j_[key].is_null()) return std::nullopt;
    return number(key, 0.0);
  }

  /// A single string or a nonempty array of strings.
  std::vector<std::string> strings(const char* key, const std::string& fallback) const {
    if (!has(key)) return {fallback};
    if (j_[key].is_string()) return {j_[key].get<std::string>()};
    const auto& a = array(key);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i].is_string()) fail(key, "entry " + std::to_string(i) + " is not a string");
      out.push_back(a[i].get<std::string>());
    }
    return out;
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!j_[key].is_boolean()) fail(key, "expected true or false");
    return j_[key].get<bool>();
  }

  std::vector<double> numbers(const char* key) const {
    const auto& a = array(key);
    std::vector<double> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i].is_number()) fail(key, "entry " + std::to_string(i) + " is not a number");
      out.push_back(a[i].get<double>());
    }
    return out;
  }

  std::vector<std::int64_t> integers(const char* key, std::int64_t min_value) const {
    const auto& a = array(key);
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i].is_number_integer()) fail(key, "entry " + std::to_string(i) + " is not an integer");
      const auto v = a[i].get<std::int64_t>();
      if (v < min_value) fail(key, "entry " + std::to_string(i) + " is below " + std::to_string(min_value));
      out.push_back(v);
    }
    return out;
  }

  std::vector<double> s_values() const {
    auto s = numbers("s");
    for (double v : s)
      if (!(v > 0.0 && v < 1.0)) fail("s", "values must lie in (0,1)");
    return s;
  }

  std::vector<double> positive(const char* key) const {
    auto v = numbers(key);
    for (double x : v)
      if (!(x > 0.0)) fail(key, "values must be positive");
    return v;
  }

  std::vector<std::uint64_t> seeds() const {
    if (!has("seeds")) return {0};
    std::vector<std::uint64_t> out;
    for (auto v : integers("seeds", 0)) out.push_back(static_cast<std::uint64_t>(v));
    return out;
  }

  [[noreturn]] static void fail(const std::string& key, const std::string& what) {
    throw ValidationError("$." + key + ": " + what);
  }

 private:
  const json& array(const char* key) const {
    if (!has(key)) fail(key, "missing");
    const auto& a = j_[key];
    if (!a.is_array()) fail(key, "expected an array");
    if (a.empty()) fail(key, "grid is empty");
    return a;
  }

  json j_;
};

using Row = std::vector<std::string>;

struct Cell {
  Row key;
  std::function<Row()> run;
};

struct Table {
  Row header;
  std::vector<Cell> cells;
};

std::vector<Row> run_cells(const Table& t, unsigned threads) {
  std::vector<Row> rows(t.cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < t.cells.size(); i = next++) {
      Row row;
      std::string error;
      try {
        row = t.cells[i].run();
      } catch (const std::exception& e) {
        error = e.what();
      }
      const auto value_columns = t.header.size() - t.cells[i].key.size() - 1;
      Row full = t.cells[i].key;
      if (error.empty()) {
        full.insert(full.end(), row.begin(), row.end());
      } else {
        full.resize(full.size() + value_columns);
      }
      full.push_back(error);
      rows[i] = std::move(full);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(t.cells.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

std::string seed_tag(int d, double s) { return "d=" + std::to_string(d) + "/s=" + fmt(s); }

std::uint64_t function_seed(std::uint64_t seed, int d, double s) { return derive_seed(seed, "truth/" + seed_tag(d, s)); }

Table rates_sobolev(const Config& c) {
  const auto dims = c.integers("dims", 1);
  const auto s_list = c.s_values();
  const auto radii = c.positive("radii");
  const auto seeds = c.seeds();
  const auto arch = parse_architecture(c.str("arch", "stacked"));
  const auto input = c.str("input", "fourier");
  if (input != "fourier" && input != "riesz") Config::fail("input", "expected fourier or riesz");
  const double r_max = c.number("support_radius", 16.0);
  const auto decay = c.opt_number("decay");
  const int L = static_cast<int>(c.number("mobius_truncation", kDefaultMobiusTruncation));
  const auto sparsity = c.opt_number("sparsity");

  Table t;
  t.header = {"R", "dim", "s", "seed", "width", "depth", "params_total", "params_nonzero", "error_l2", "certified_bound", "error"};
  for (auto d : dims)
    for (double s : s_list)
      for (auto seed : seeds)
        for (double R : radii) {
          t.cells.push_back({{fmt(R), fmt(d), fmt(s), fmt(seed)}, [=] {
                               RandomSpec spec;
                               spec.dim = static_cast<int>(d);
                               spec.s = s;
                               spec.support_radius = r_max;
                               spec.decay = decay.value_or(s + static_cast<double>(d) / 2.0);
                               if (sparsity) spec.sparsity = static_cast<std::uint64_t>(*sparsity);
                               spec.seed = function_seed(seed, static_cast<int>(d), s);
                               ApproxOptions opt;
                               opt.radius = R;
                               opt.mobius_truncation = L;
                               const double eps = std::min(0.5, std::pow(R, -s));
                               const auto res = input == "fourier"
                                                    ? approximate_sobolev(random_unit_ball(NormSpace::Ws, spec), s, eps, arch, opt)
                                                    : approximate_sobolev(random_unit_ball_riesz(NormSpace::Fs, spec), s, eps, arch, opt);
                               const auto& r = res.report;
                               return Row{fmt(r.width), fmt(r.depth), fmt(r.params_total), fmt(r.params_nonzero),
                                          fmt(r.error_l2_exact), fmt(r.error_bound_certified)};
                             }});
        }
  return t;
}

Table rates_barron(const Config& c) {
  const auto dims = c.integers("dims", 1);
  const auto s_list = c.s_values();
  const auto n_list = c.integers("n_terms", 1);
  const auto seeds = c.seeds();
  const auto arch = parse_architecture(c.str("arch", "stacked"));
  const double r_max = c.number("support_radius", 16.0);
  const auto decay = c.opt_number("decay");
  const auto sparsity = c.opt_number("sparsity");

  Table t;
  t.header = {"n", "dim", "s", "seed", "width", "depth", "params_total", "params_nonzero", "error_l2", "certified_bound",
              "sigma_n", "sigma_bound", "error"};
  for (auto d : dims)
    for (double s : s_list)
      for (auto seed : seeds)
        for (auto n : n_list) {
          t.cells.push_back({{fmt(n), fmt(d), fmt(s), fmt(seed)}, [=] {
                               RandomSpec spec;
                               spec.dim = static_cast<int>(d);
                               spec.s = s;
                               spec.support_radius = r_max;
                               spec.decay = decay.value_or(s + static_cast<double>(d) / 2.0);
                               if (sparsity) spec.sparsity = static_cast<std::uint64_t>(*sparsity);
                               spec.seed = function_seed(seed, static_cast<int>(d), s);
                               const auto g = random_unit_ball_riesz(NormSpace::BsSeq, spec);
                               const auto sel = best_n_term(g, static_cast<std::size_t>(n));
                               const auto net = build_network(sel.selected, arch);
                               const double err = l2_norm(linear_combination(1.0, g, -1.0, sel.selected));
                               const double cert = std::sqrt(kRieszUpper) * sel.sigma;
                               const auto W = static_cast<std::uint64_t>(net.width());
                               const auto Ld = static_cast<std::uint64_t>(net.depth());
                               return Row{fmt(net.width()), fmt(net.depth()), fmt(param_count(W, Ld, static_cast<std::uint64_t>(d))),
                                          fmt(nonzero_params(net)), fmt(err), fmt(cert), fmt(sel.sigma),
                                          fmt(sigma_upper_bound(static_cast<std::uint64_t>(n), static_cast<int>(d), s))};
                             }});
        }
  return t;
}

Table gram_check(const Config& c) {
  const auto dims = c.integers("dims", 1);
  const auto radii = c.positive("radii");
  const bool normalized = c.boolean("normalized", true);
  Table t;
  t.header = {"dim", "R", "n_basis", "lambda_min", "lambda_max", "within_riesz_bounds", "error"};
  for (auto d : dims)
    for (double R : radii)
      t.cells.push_back({{fmt(d), fmt(R)}, [=] {
                           const auto ids = recovery_basis(R, static_cast<int>(d));
                           auto G = gram_matrix(ids).entries;
                           if (normalized)
                             for (Eigen::Index i = 0; i < G.rows(); ++i)
                               for (Eigen::Index j = 0; j < G.cols(); ++j)
                                 G(i, j) /= basis_l2_norm(ids[static_cast<std::size_t>(i)]) *
                                            basis_l2_norm(ids[static_cast<std::size_t>(j)]);
                           const Eigen::VectorXd ev =
                               Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G, Eigen::EigenvaluesOnly).eigenvalues();
                           // The bounds refer to the normalized system.
                           const bool ok = ev.minCoeff() >= 0.5 - 1e-8 && ev.maxCoeff() <= 1.5 + 1e-8;
                           return Row{fmt(static_cast<std::uint64_t>(ids.size())), fmt(ev.minCoeff()), fmt(ev.maxCoeff()),
                                      normalized ? (ok ? "true" : "false") : ""};
                         }});
  return t;
}

Table lattice_bounds(const Config& c) {
  const auto dims = c.integers("dims", 1);
  const auto radii = c.positive("radii");
  Table t;
  t.header = {"t", "d", "N", "bound_i", "bound_ii", "error"};
  for (double r : radii)
    for (auto d : dims)
      t.cells.push_back({{fmt(r), fmt(d)}, [=] {
                           const auto spec = BallSpec::from_radius(r, static_cast<int>(d));
                           return Row{fmt(count_ball(spec)), fmt(bound_large_radius(spec)), fmt(bound_small_radius(spec))};
                         }});
  return t;
}

Table recovery_sweep(const Config& c) {
  std::vector<RecoveryMethod> methods;
  for (const auto& m : c.strings("method", "ls")) methods.push_back(parse_method(m));
  const auto dims = c.integers("dims", 1);
  const auto s_list = c.s_values();
  const auto radii = c.positive("radii");
  const auto n_list = c.integers("n_samples", 1);
  const auto seeds = c.seeds();
  const auto delta = c.opt_number("delta");
  const double r_max = c.number("support_radius", 8.0);
  const auto decay = c.opt_number("decay");
  const auto sparsity = c.opt_number("sparsity");
  const auto n_mc = static_cast<std::size_t>(c.number("n_mc", 2000));

  Table t;
  t.header = {"method", "d", "s", "R", "n_basis", "N", "seed", "residual_rms", "err_l2", "err_linf", "sigma_min", "iterations",
              "error"};
  for (auto method : methods)
    for (auto d : dims)
      for (double s : s_list)
        for (double R : radii)
          for (auto N : n_list)
            for (auto seed : seeds) {
              const auto n_basis = recovery_basis(R, static_cast<int>(d)).size();
              t.cells.push_back({{method_name(method), fmt(d), fmt(s), fmt(R), fmt(static_cast<std::uint64_t>(n_basis)), fmt(N), fmt(seed)},
                                 [=] {
                                   RandomSpec spec;
                                   spec.dim = static_cast<int>(d);
                                   spec.s = s;
                                   spec.support_radius = r_max;
                                   spec.decay = decay.value_or(s + static_cast<double>(d) / 2.0);
                                   if (sparsity) spec.sparsity = static_cast<std::uint64_t>(*sparsity);
                                   spec.seed = function_seed(seed, static_cast<int>(d), s);
                                   const auto truth = random_unit_ball_riesz(NormSpace::BsSeq, spec);
                                   const auto samples =
                                       draw_samples(truth, static_cast<std::size_t>(N),
                                                    derive_seed(seed, "samples/" + seed_tag(static_cast<int>(d), s), static_cast<std::uint64_t>(N)));
                                   const auto rec = method == RecoveryMethod::LeastSquares
                                                        ? least_squares_recover(samples, R)
                                                        : basis_pursuit_recover(samples, R, delta.value_or(default_delta(s, R)));
                                   ErrorReportOptions eo;
                                   eo.p_list = {INFINITY};
                                   eo.n_mc = n_mc;
                                   eo.seed = derive_seed(seed, "error_report");
                                   eo.s = s;
                                   eo.radius = R;
                                   const auto er = recovery_error_report(truth, rec.coeffs, eo);
                                   const auto& r = rec.report;
                                   return Row{fmt(r.residual_rms), fmt(er.l2_exact), fmt(er.lp[0].value), fmt(r.sigma_min),
                                              fmt(static_cast<std::uint64_t>(r.iterations))};
                                 }});
            }
  return t;
}

}  // namespace

std::string run_experiment(const std::string& config_text, std::optional<unsigned> threads) {
  json j;
  try {
    j = json::parse(config_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  const Config c(j);
  const auto kind = c.str("kind", "");
  Table table;
  if (kind == "rates_sobolev") {
    table = rates_sobolev(c);
  } else if (kind == "rates_barron") {
    table = rates_barron(c);
  } else if (kind == "gram_check") {
    table = gram_check(c);
  } else if (kind == "lattice_bounds") {
    table = lattice_bounds(c);
  } else if (kind == "recovery_sweep") {
    table = recovery_sweep(c);
  } else {
    Config::fail("kind", kind.empty() ? "missing" : "unknown experiment kind '" + kind + "'");
  }
  unsigned n_threads = threads.value_or(static_cast<unsigned>(c.number("threads", 0)));
  if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
  const auto rows = run_cells(table, n_threads);

  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  std::string seeds;
  for (auto s : c.seeds()) seeds += (seeds.empty() ? "" : ",") + std::to_string(s);
  std::string out;
  out += "# tool: rrnet " + std::string(kToolVersion) + "\n";
  out += "# kind: " + kind + "\n";
  out += "# config_fnv1a64: " + std::string(hash) + "\n";
  out += "# seeds: " + seeds + "\n";
  out += "# generator: " + std::string(Rng::kGeneratorId) + "\n";
  out += csv_line(table.header);
  for (const auto& r : rows) out += csv_line(r);
  return out;
}

}  // namespace rrnet
