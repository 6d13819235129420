// Calibrates the regime-3 constant of lower_bound_W and prints the sigma
// bound check. With --write <constants.cpp> the weight table is frozen in place.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "reluriesz/approx.hpp"
#include "reluriesz/lattice.hpp"

using namespace reluriesz;

namespace {

constexpr double kGridS[] = {0.0, 0.25, 0.5, 0.75, 1.0};
constexpr std::uint64_t kMaxL = 10'000;
constexpr int kMaxD = 8;

// min over l <= kMaxL, d <= kMaxD of W(l) / (d^{s/2} l^{s/d + 1}).
double weight_ratio(double s) {
  double worst = INFINITY;
  for (int d = 1; d <= kMaxD; ++d) {
    const auto pts = weight_rearrangement(kMaxL, d, s);
    double W = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      W += pts[i].weight;
      const double l = static_cast<double>(i + 1);
      worst = std::min(worst, W / (std::pow(d, s / 2.0) * std::pow(l, s / d + 1.0)));
    }
  }
  return worst;
}

// max over n, m of the flat-profile sigma_n^2 = (m - n) / W(m)^2 relative to the bound shape.
double sigma_ratio(double s) {
  double worst = 0.0;
  for (int d : {2, 4, 8}) {
    const auto pts = weight_rearrangement(4 * kMaxL, d, s);
    std::vector<double> W(pts.size() + 1, 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i) W[i + 1] = W[i] + pts[i].weight;
    for (std::uint64_t n = 1; n <= 1000; n = n < 10 ? n + 1 : n * 2) {
      double best = 0.0;
      for (std::size_t m = n + 1; m < W.size(); ++m) best = std::max(best, (m - n) / (W[m] * W[m]));
      const double bound = sigma_upper_bound(n, d, std::min(s, 0.999));
      worst = std::max(worst, best / (bound * bound));
    }
  }
  return worst;
}

std::string table(const char* name, const std::vector<double>& v) {
  std::string out = "constexpr std::array<double, 5> " + std::string(name) + " = {";
  for (std::size_t i = 0; i < v.size(); ++i) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v[i]);
    out += (i ? ", " : "") + std::string(buf);
  }
  return out + "};\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::string write_path;
  for (int i = 1; i < argc; ++i)
    if (std::string(argv[i]) == "--write" && i + 1 < argc) write_path = argv[++i];

  std::vector<double> weight;
  std::vector<double> sigma;
  for (double s : kGridS) {
    weight.push_back(weight_ratio(s));
    sigma.push_back(1.0);
    std::printf("s=%.2f weight_ratio_min=%.6g sigma_ratio_max=%.6g\n", s, weight.back(), sigma_ratio(s));
  }
  // The sigma constant stays at 1: the flat-profile ratio above is reported as a check only.
  const std::string block = table("kWeightConstant", weight) + table("kSigmaConstant", sigma);
  std::cout << block;

  if (!write_path.empty()) {
    std::ifstream in(write_path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    const std::string begin = "// BEGIN CALIBRATED TABLES\n";
    const std::string end = "// END CALIBRATED TABLES";
    const auto b = text.find(begin);
    const auto e = text.find(end);
    if (b == std::string::npos || e == std::string::npos) {
      std::cerr << "markers not found in " << write_path << '\n';
      return 1;
    }
    text.replace(b + begin.size(), e - b - begin.size(), block);
    std::ofstream(write_path) << text;
    std::cerr << "updated " << write_path << '\n';
  }
  return 0;
}
