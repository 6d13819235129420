#include "rrnet/cli.hpp"

#include <algorithm>
#include <ostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "format.hpp"
#include "reluriesz/errors.hpp"

namespace rrnet {

namespace {

struct Options {
  std::string kind, k, x;
  double t = 1.0;
  int d = 1;
  bool half = false;
  std::string out, in, dir, net, config;
  std::int64_t n = 1;
  std::optional<int> trunc;
  double radius = 1.0;
  int dim = 1;
  bool normalized = false;
  std::string arch = "stacked";
  std::size_t points = 1000;
  std::uint64_t seed = 0;
  std::optional<unsigned> threads;
  ApproxArgs approx;
  RecoverArgs recover;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ReLU realizations of the piecewise-linear Riesz basis", "rrnet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  Options o;
  Streams io{out, err};

  auto* basis = app.add_subcommand("basis", "Evaluate basis functions")->require_subcommand(1);
  auto* basis_eval = basis->add_subcommand("eval", "Evaluate C_k, S_k or 1 at a point");
  basis_eval->add_option("--kind", o.kind, "cos, sin or const")->required();
  basis_eval->add_option("--k", o.k, "comma-separated index");
  basis_eval->add_option("--x", o.x, "comma-separated point")->required();

  auto* lattice = app.add_subcommand("lattice", "Integer points in Euclidean balls")->require_subcommand(1);
  auto* lat_count = lattice->add_subcommand("count", "N(t, d)");
  auto* lat_enum = lattice->add_subcommand("enum", "List the points as CSV");
  auto* lat_bounds = lattice->add_subcommand("bounds", "N(t, d) next to both upper bounds");
  for (auto* sub : {lat_count, lat_enum, lat_bounds}) {
    sub->add_option("--t", o.t, "radius")->required();
    sub->add_option("--d", o.d, "dimension")->required();
  }
  lat_enum->add_flag("--half", o.half, "positive-leading points only");
  lat_enum->add_option("--out", o.out, "CSV path (default stdout)");

  auto* mob = app.add_subcommand("mobius", "Moebius function");
  mob->add_option("n", o.n)->required();

  auto* transform = app.add_subcommand("transform", "Convert coefficient files");
  transform->add_option("--dir", o.dir, "f2r or r2f")->required();
  transform->add_option("--trunc", o.trunc, "truncation L (f2r) or P (r2f)");
  transform->add_option("--in", o.in)->required();
  transform->add_option("--out", o.out);

  auto* gram = app.add_subcommand("gram", "Gram matrix of the basis in a ball");
  gram->add_option("--radius", o.radius)->required();
  gram->add_option("--dim", o.dim)->required();
  gram->add_flag("--normalized", o.normalized, "divide by the L2 norms");
  gram->add_option("--out", o.out, "CSV path; the eigenvalue summary then goes to stdout");

  auto* net = app.add_subcommand("net", "Build, evaluate, audit and export networks")->require_subcommand(1);
  auto* net_build = net->add_subcommand("build", "Exact network for a coefficient file");
  net_build->add_option("--arch", o.arch, "stacked or inline");
  net_build->add_option("--in", o.in)->required();
  net_build->add_option("--out", o.out);
  auto* net_eval = net->add_subcommand("eval", "Evaluate a network file");
  net_eval->add_option("--net", o.net)->required();
  net_eval->add_option("--x", o.x)->required();
  auto* net_check = net->add_subcommand("check", "Width, depth, weight and exactness audit");
  net_check->add_option("--net", o.net)->required();
  net_check->add_option("--points", o.points);
  net_check->add_option("--seed", o.seed);
  auto* net_export = net->add_subcommand("export", "Flat CSV of all weights and biases");
  net_export->add_option("--net", o.net)->required();
  net_export->add_option("--out", o.out);

  auto* approx = app.add_subcommand("approx", "Error-certified approximation")->require_subcommand(1);
  for (const char* name : {"sobolev", "barron"}) {
    auto* sub = approx->add_subcommand(
        name, std::string(name) == "sobolev" ? "Radius truncation with a certified L2 bound" : "Best n-term selection with a certified L2 bound");
    sub->add_option("--s", o.approx.s)->required();
    sub->add_option("--eps", o.approx.eps)->required();
    sub->add_option("--arch", o.approx.arch);
    sub->add_option("--in", o.approx.in)->required();
    sub->add_option("--out", o.approx.out, "network JSON");
    sub->add_option("--report", o.approx.report, "report JSON (default stdout)");
    sub->add_option("--radius", o.approx.radius);
    sub->add_option("--radius-constant", o.approx.radius_constant);
    sub->add_option("--trunc", o.approx.trunc);
    sub->callback([&o, name] { o.approx.pipeline = name; });
  }

  auto* recover = app.add_subcommand("recover", "Recover a function from random samples");
  recover->add_option("--config", o.config, "batch mode: recovery_sweep config");
  recover->add_option("--method", o.recover.method, "ls or bp");
  recover->add_option("--radius", o.recover.radius);
  recover->add_option("--n-samples", o.recover.n_samples);
  recover->add_option("--delta", o.recover.delta);
  recover->add_option("--s", o.recover.s, "smoothness for the default delta and the bound");
  recover->add_option("--seed", o.recover.seed);
  recover->add_option("--truth", o.recover.truth);
  recover->add_option("--report", o.recover.report);
  recover->add_option("--out", o.recover.out, "recovered coefficients / batch CSV");
  recover->add_option("--p-list", o.recover.p_list);
  recover->add_option("--n-mc", o.recover.n_mc);
  recover->add_flag("--resample-on-fail", o.recover.resample_on_fail);
  recover->add_option("--threads", o.threads);

  auto* experiment = app.add_subcommand("experiment", "Run experiment configs")->require_subcommand(1);
  auto* exp_run = experiment->add_subcommand("run", "Any experiment kind");
  auto* exp_rates = experiment->add_subcommand("rates", "rates_sobolev or rates_barron");
  for (auto* sub : {exp_run, exp_rates}) {
    sub->add_option("--config", o.config)->required();
    sub->add_option("--out", o.out, "CSV path (default stdout)");
    sub->add_option("--threads", o.threads);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    log_line(err, e.what());
    return kValidation;
  }

  try {
    if (*basis_eval) return cmd_basis_eval(o.kind, o.k, o.x, io);
    if (*lat_count) return cmd_lattice_count(o.t, o.d, io);
    if (*lat_enum) return cmd_lattice_enum(o.t, o.d, o.half, o.out, io);
    if (*lat_bounds) return cmd_lattice_bounds(o.t, o.d, io);
    if (*mob) return cmd_mobius(o.n, io);
    if (*transform) return cmd_transform(o.dir, o.trunc, o.in, o.out, io);
    if (*gram) return cmd_gram(o.radius, o.dim, o.normalized, o.out, io);
    if (*net_build) return cmd_net_build(o.arch, o.in, o.out, io);
    if (*net_eval) return cmd_net_eval(o.net, o.x, io);
    if (*net_check) return cmd_net_check(o.net, o.points, o.seed, io);
    if (*net_export) return cmd_net_export(o.net, o.out, io);
    if (*approx) return cmd_approx(o.approx, io);
    if (*recover) {
      if (!o.config.empty()) return cmd_experiment(o.config, o.recover.out, o.threads, {"recovery_sweep"}, io);
      if (o.recover.truth.empty()) throw reluriesz::UsageError("recover needs --truth (or --config for batch mode)");
      return cmd_recover(o.recover, io);
    }
    if (*exp_run) return cmd_experiment(o.config, o.out, o.threads, {}, io);
    if (*exp_rates) return cmd_experiment(o.config, o.out, o.threads, {"rates_sobolev", "rates_barron"}, io);
  } catch (const reluriesz::SolverError& e) {
    log_line(err, std::string("solver error: ") + e.what());
    return kSolverFailure;
  } catch (const reluriesz::ParseError& e) {
    log_line(err, std::string("parse error: ") + e.what());
    return kValidation;
  } catch (const reluriesz::ValidationError& e) {
    log_line(err, std::string("validation error: ") + e.what());
    return kValidation;
  } catch (const reluriesz::UsageError& e) {
    log_line(err, std::string("usage error: ") + e.what());
    return kValidation;
  } catch (const reluriesz::DomainError& e) {
    log_line(err, std::string("domain error: ") + e.what());
    return kValidation;
  } catch (const reluriesz::DimensionError& e) {
    log_line(err, std::string("dimension error: ") + e.what());
    return kValidation;
  } catch (const reluriesz::SizeError& e) {
    log_line(err, std::string("size error: ") + e.what());
    return kValidation;
  } catch (const std::exception& e) {
    log_line(err, std::string("error: ") + e.what());
    return kInternal;
  }
  return kInternal;
}

}  // namespace rrnet
