#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rrnet {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

int cmd_basis_eval(const std::string& kind, const std::string& k, const std::string& x, Streams io);

int cmd_lattice_count(double t, int d, Streams io);
int cmd_lattice_enum(double t, int d, bool half, const std::string& out_path, Streams io);
int cmd_lattice_bounds(double t, int d, Streams io);

int cmd_mobius(std::int64_t n, Streams io);
int cmd_transform(const std::string& dir, std::optional<int> trunc, const std::string& in, const std::string& out_path,
                  Streams io);
int cmd_gram(double radius, int dim, bool normalized, const std::string& out_path, Streams io);

int cmd_net_build(const std::string& arch, const std::string& in, const std::string& out_path, Streams io);
int cmd_net_eval(const std::string& net_path, const std::string& x, Streams io);
int cmd_net_check(const std::string& net_path, std::size_t points, std::uint64_t seed, Streams io);
int cmd_net_export(const std::string& net_path, const std::string& out_path, Streams io);

struct ApproxArgs {
  std::string pipeline;
  double s = 0.5;
  double eps = 0.1;
  std::string arch = "stacked";
  std::string in;
  std::string out;
  std::string report;
  std::optional<double> radius;
  std::optional<double> radius_constant;
  std::optional<int> trunc;
};
int cmd_approx(const ApproxArgs& a, Streams io);

struct RecoverArgs {
  std::string method = "ls";
  double radius = 2.0;
  std::size_t n_samples = 0;
  std::optional<double> delta;
  double s = 0.5;
  std::uint64_t seed = 0;
  std::string truth;
  std::string report;
  std::string out;
  std::string p_list = "2,inf";
  std::size_t n_mc = 20'000;
  bool resample_on_fail = false;
};
int cmd_recover(const RecoverArgs& a, Streams io);

int cmd_experiment(const std::string& config, const std::string& out_path, std::optional<unsigned> threads,
                   const std::vector<std::string>& allowed_kinds, Streams io);

}  // namespace rrnet
