#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "format.hpp"
#include "reluriesz/approx.hpp"
#include "reluriesz/coeff_io.hpp"
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

json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

RieszCoeffs as_riesz(const AnyCoeffs& any, int L, std::ostream& err) {
  if (const auto* g = std::get_if<RieszCoeffs>(&any)) return *g;
  const auto conv = fourier_to_riesz(std::get<FourierCoeffs>(any), L);
  log_line(err, "converted Fourier input with L = " + std::to_string(L) + ", sup-norm tail bound " + fmt(conv.tail_bound));
  return conv.coeffs;
}

MultiIndex index_from(const std::string& text) { return MultiIndex(parse_int_list(text)); }

}  // namespace

int cmd_basis_eval(const std::string& kind, const std::string& k, const std::string& x, Streams io) {
  const auto x_vals = parse_double_list(x);
  const auto bk = parse_kind(kind);
  BasisId id;
  if (bk == BasisKind::Const) {
    id = BasisId::constant();
  } else {
    auto idx = index_from(k);
    if (idx.dim() != x_vals.size()) throw DimensionError("--k and --x have different lengths");
    id = bk == BasisKind::Cos ? BasisId::cos(std::move(idx)) : BasisId::sin(std::move(idx));
  }
  io.out << fmt(eval_basis(id, x_vals)) << '\n';
  return kOk;
}

int cmd_lattice_count(double t, int d, Streams io) {
  io.out << count_ball(BallSpec::from_radius(t, d)) << '\n';
  return kOk;
}

int cmd_lattice_enum(double t, int d, bool half, const std::string& out_path, Streams io) {
  const auto spec = BallSpec::from_radius(t, d);
  const auto pts = half ? enumerate_half_ball(spec) : enumerate_ball(spec);
  std::vector<std::string> header;
  for (int i = 1; i <= d; ++i) header.push_back("k" + std::to_string(i));
  std::string text = csv_line(header);
  for (const auto& k : pts) {
    std::vector<std::string> row;
    for (auto v : k.entries()) row.push_back(fmt(static_cast<std::int64_t>(v)));
    text += csv_line(row);
  }
  emit(out_path, text, io.out);
  return kOk;
}

int cmd_lattice_bounds(double t, int d, Streams io) {
  const auto spec = BallSpec::from_radius(t, d);
  std::string text = csv_line({"t", "d", "N", "bound_i", "bound_ii"});
  const double bi = t > 0 ? bound_large_radius(spec) : std::numeric_limits<double>::quiet_NaN();
  const double bii = t > 0 ? bound_small_radius(spec) : std::numeric_limits<double>::quiet_NaN();
  text += csv_line({fmt(t), fmt(d), fmt(count_ball(spec)), fmt(bi), fmt(bii)});
  io.out << text;
  return kOk;
}

int cmd_mobius(std::int64_t n, Streams io) {
  io.out << mobius(n) << '\n';
  return kOk;
}

int cmd_transform(const std::string& dir, std::optional<int> trunc, const std::string& in, const std::string& out_path,
                  Streams io) {
  const auto any = read_coeffs_file(in);
  std::string text;
  double tail = 0.0;
  if (dir == "f2r") {
    const auto* f = std::get_if<FourierCoeffs>(&any);
    if (!f) throw UsageError("transform --dir f2r expects Fourier coefficients (field a0)");
    const auto r = fourier_to_riesz(*f, trunc.value_or(kDefaultMobiusTruncation));
    text = to_json(r.coeffs);
    tail = r.tail_bound;
  } else if (dir == "r2f") {
    const auto* g = std::get_if<RieszCoeffs>(&any);
    if (!g) throw UsageError("transform --dir r2f expects generator coefficients (field alpha0)");
    const auto r = riesz_to_fourier(*g, trunc.value_or(kDefaultHarmonicCap));
    text = to_json(r.coeffs);
    tail = r.tail_bound;
  } else {
    throw UsageError("--dir must be f2r or r2f");
  }
  emit(out_path, text + "\n", io.out);
  log_line(io.err, "sup-norm tail bound " + fmt(tail));
  return kOk;
}

int cmd_gram(double radius, int dim, bool normalized, const std::string& out_path, Streams io) {
  const auto ids = recovery_basis(radius, dim);
  auto G = gram_matrix(ids);
  if (normalized) {
    for (Eigen::Index i = 0; i < G.entries.rows(); ++i)
      for (Eigen::Index j = 0; j < G.entries.cols(); ++j)
        G.entries(i, j) /= basis_l2_norm(ids[static_cast<std::size_t>(i)]) * basis_l2_norm(ids[static_cast<std::size_t>(j)]);
  }
  std::string text = csv_line({"i", "j", "basis_i", "basis_j", "value"});
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = 0; j < ids.size(); ++j)
      text += csv_line({fmt(static_cast<std::uint64_t>(i)), fmt(static_cast<std::uint64_t>(j)), ids[i].to_string(),
                        ids[j].to_string(), fmt(G.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))});
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G.entries, Eigen::EigenvaluesOnly).eigenvalues();
  json summary{{"dim", dim},
               {"radius", radius},
               {"normalized", normalized},
               {"n_basis", ids.size()},
               {"lambda_min", ev.minCoeff()},
               {"lambda_max", ev.maxCoeff()}};
  if (out_path.empty()) {
    io.out << text;
    io.err << summary.dump() << '\n';
  } else {
    write_text_file(out_path, text);
    io.out << summary.dump(2) << '\n';
  }
  return kOk;
}

int cmd_net_build(const std::string& arch, const std::string& in, const std::string& out_path, Streams io) {
  const auto coeffs = as_riesz(read_coeffs_file(in), kDefaultMobiusTruncation, io.err);
  const auto net = build_network(coeffs, parse_architecture(arch));
  emit(out_path, serialize(net) + "\n", io.out);
  log_line(io.err, "built " + arch + " net: width " + std::to_string(net.width()) + ", depth " + std::to_string(net.depth()));
  return kOk;
}

int cmd_net_eval(const std::string& net_path, const std::string& x, Streams io) {
  const auto net = deserialize(read_text_file(net_path));
  const auto xs = parse_double_list(x);
  if (static_cast<int>(xs.size()) != net.dim_in())
    throw DimensionError("--x has " + std::to_string(xs.size()) + " entries, the net expects " + std::to_string(net.dim_in()));
  io.out << fmt(net.eval(xs)) << '\n';
  return kOk;
}

int cmd_net_check(const std::string& net_path, std::size_t points, std::uint64_t seed, Streams io) {
  const auto net = deserialize(read_text_file(net_path));
  const auto audit = audit_network(net, points, seed);
  json j{{"width", net.width()},
         {"depth", net.depth()},
         {"params_total", param_count(static_cast<std::uint64_t>(net.width()), static_cast<std::uint64_t>(net.depth()),
                                      static_cast<std::uint64_t>(net.dim_in()))},
         {"params_nonzero", nonzero_params(net)},
         {"max_abs_weight", max_abs_weight(net)},
         {"width_ok", audit.width_ok},
         {"depth_ok", audit.depth_ok},
         {"weight_ok", audit.weight_ok},
         {"exact_ok", audit.exact_ok},
         {"max_exactness_error", num(audit.max_exactness_error)},
         {"violations", audit.messages}};
  io.out << j.dump(2) << '\n';
  for (const auto& m : audit.messages) log_line(io.err, "audit violation: " + m);
  return audit.ok() ? kOk : kAuditFailure;
}

int cmd_net_export(const std::string& net_path, const std::string& out_path, Streams io) {
  const auto net = deserialize(read_text_file(net_path));
  std::string text = csv_line({"layer", "row", "col", "kind", "value"});
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    const auto& layer = net.layers()[l];
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
        text += csv_line({fmt(static_cast<std::uint64_t>(l)), fmt(static_cast<std::int64_t>(r)), fmt(static_cast<std::int64_t>(c)),
                          "weight", fmt(layer.weights(r, c))});
      text += csv_line({fmt(static_cast<std::uint64_t>(l)), fmt(static_cast<std::int64_t>(r)), "", "bias", fmt(layer.bias(r))});
    }
  }
  emit(out_path, text, io.out);
  return kOk;
}

int cmd_approx(const ApproxArgs& a, Streams io) {
  const auto any = read_coeffs_file(a.in);
  const auto arch = parse_architecture(a.arch);
  ApproxOptions opt;
  opt.radius = a.radius;
  opt.radius_constant = a.radius_constant;
  if (a.trunc) opt.mobius_truncation = *a.trunc;
  ApproxResult result = std::visit(
      [&](const auto& c) {
        if (a.pipeline == "sobolev") return approximate_sobolev(c, a.s, a.eps, arch, opt);
        if (a.pipeline == "barron") return approximate_barron(c, a.s, a.eps, arch, opt);
        throw UsageError("approx pipeline must be sobolev or barron");
      },
      any);
  const auto& r = result.report;
  json j{{"pipeline", r.pipeline},
         {"architecture", architecture_name(r.architecture)},
         {"s", r.s},
         {"epsilon_target", r.epsilon_target},
         {"radius", r.radius},
         {"input_norm", r.input_norm},
         {"norm_space", r.norm_space},
         {"n_terms", r.n_terms},
         {"width", r.width},
         {"depth", r.depth},
         {"params_total", r.params_total},
         {"params_nonzero", r.params_nonzero},
         {"error_l2_exact", r.error_l2_exact},
         {"error_bound_certified", r.error_bound_certified},
         {"conversion_tail", r.conversion_tail},
         {"sigma_n", r.sigma_n},
         {"sigma_class_bound", num(r.sigma_class_bound)},
         {"target_met", r.target_met},
         {"width_bound_ok", r.width_bound_ok},
         {"depth_bound_ok", r.depth_bound_ok}};
  if (!a.out.empty()) write_text_file(a.out, serialize(result.net) + "\n");
  emit(a.report, j.dump(2) + "\n", io.out);
  if (!r.target_met) log_line(io.err, "certified bound does not meet eps * ||f||");
  if (!r.width_bound_ok || !r.depth_bound_ok) {
    log_line(io.err, "structural bound violated");
    return kAuditFailure;
  }
  return kOk;
}

int cmd_recover(const RecoverArgs& a, Streams io) {
  const auto truth = read_coeffs_file(a.truth);
  const auto method = parse_method(a.method);
  if (a.n_samples == 0) throw UsageError("--n-samples must be positive");
  const double delta = a.delta.value_or(default_delta(a.s, a.radius));

  std::optional<Recovery> rec;
  std::uint64_t sample_seed = a.seed;
  const int attempts = a.resample_on_fail ? 5 : 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    const auto samples = std::visit([&](const auto& f) { return draw_samples(f, a.n_samples, sample_seed); }, truth);
    rec = method == RecoveryMethod::LeastSquares ? least_squares_recover(samples, a.radius)
                                                 : basis_pursuit_recover(samples, a.radius, delta);
    if (!rec->report.rank_deficient || method == RecoveryMethod::BasisPursuit) break;
    if (attempt + 1 < attempts) {
      sample_seed = derive_seed(a.seed, "resample", static_cast<std::uint64_t>(attempt + 1));
      log_line(io.err, "rank-deficient design; resampling with seed " + std::to_string(sample_seed));
    }
  }

  ErrorReportOptions eo;
  eo.p_list = parse_double_list(a.p_list);
  eo.n_mc = a.n_mc;
  eo.seed = derive_seed(a.seed, "error_report");
  eo.s = a.s;
  eo.radius = a.radius;
  const auto er = std::visit([&](const auto& f) { return recovery_error_report(f, rec->coeffs, eo); }, truth);

  const auto& r = rec->report;
  json lp = json::array();
  for (std::size_t i = 0; i < er.lp.size(); ++i)
    lp.push_back({{"p", num(er.lp[i].p)},
                  {"value", er.lp[i].value},
                  {"standard_error", er.lp[i].standard_error},
                  {"two_term_bound", num(er.two_term_bound[i])}});
  json j{{"method", method_name(r.method)},
         {"radius", r.radius},
         {"n_basis", r.n_basis},
         {"n_samples", r.n_samples},
         {"seed", sample_seed},
         {"delta", r.delta},
         {"residual_rms", r.residual_rms},
         {"sigma_min", r.sigma_min},
         {"sigma_max", r.sigma_max},
         {"rank_deficient", r.rank_deficient},
         {"normal_residual", r.normal_residual},
         {"iterations", r.iterations},
         {"solver_path", r.solver_path},
         {"converged", r.converged},
         {"error_l2_exact", er.l2_exact},
         {"error_lp", lp}};
  if (!a.out.empty()) write_text_file(a.out, to_json(rec->coeffs) + "\n");
  emit(a.report, j.dump(2) + "\n", io.out);
  return kOk;
}

int cmd_experiment(const std::string& config, const std::string& out_path, std::optional<unsigned> threads,
                   const std::vector<std::string>& allowed_kinds, Streams io) {
  const auto text = read_text_file(resolve_config_path(config));
  if (!allowed_kinds.empty()) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ParseError(std::string("config: ") + e.what());
    }
    const auto kind = j.value("kind", std::string());
    if (std::find(allowed_kinds.begin(), allowed_kinds.end(), kind) == allowed_kinds.end())
      throw ValidationError("$.kind: '" + kind + "' is not valid for this command");
  }
  emit(out_path, run_experiment(text, threads), io.out);
  return kOk;
}

}  // namespace rrnet
