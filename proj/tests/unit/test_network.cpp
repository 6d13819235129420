#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "reluriesz/errors.hpp"
#include "reluriesz/lattice.hpp"
#include "reluriesz/network.hpp"
#include "reluriesz/rng.hpp"

using namespace reluriesz;

namespace {

double direct_sum(const RieszCoeffs& c, const std::vector<double>& x) {
  double acc = c.constant;
  for (const auto& [k, cp] : c.terms)
    acc += cp.c * eval_basis(BasisId::cos(k), x) + cp.s * eval_basis(BasisId::sin(k), x);
  return acc;
}

RieszCoeffs random_coeffs(Rng& rng, int d, double R, std::size_t max_terms) {
  auto half = enumerate_half_ball(BallSpec::from_radius(R, d));
  RieszCoeffs c(d, rng.normal());
  const auto n = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_terms)));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& k = half[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(half.size() - 1)))];
    c.add(k, rng.normal(), rng.uniform() < 0.2 ? 0.0 : rng.normal());
  }
  return c;
}

std::vector<double> random_point(Rng& rng, int d) {
  std::vector<double> x(static_cast<std::size_t>(d));
  for (auto& v : x) v = rng.uniform();
  return x;
}

}  // namespace

TEST(Hat, LiteralWeightsAndValues) {
  const auto h = build_hat();
  EXPECT_EQ(h.layers()[0].weights(0, 0), 1.0);
  EXPECT_EQ(h.layers()[0].weights(1, 0), 1.0);
  EXPECT_EQ(h.layers()[0].bias(1), -0.5);
  EXPECT_EQ(h.layers()[1].weights(0, 0), 2.0);
  EXPECT_EQ(h.layers()[1].weights(0, 1), -4.0);
  EXPECT_EQ(h.eval(std::vector<double>{0.0}), 0.0);
  EXPECT_EQ(h.eval(std::vector<double>{0.5}), 1.0);
  EXPECT_EQ(h.eval(std::vector<double>{1.0}), 0.0);
  EXPECT_EQ(h.eval(std::vector<double>{0.25}), 0.5);
  EXPECT_EQ(h.width(), 2);
  EXPECT_EQ(h.depth(), 1);
  EXPECT_EQ(param_count(2, 1, 1), 7u);
}

TEST(Hat, CompositionHasHalfPeriod) {
  const auto h = build_hat();
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double x = 0.5 * rng.uniform();
    const double a = h.eval(std::vector<double>{h.eval(std::vector<double>{x})});
    const double b = h.eval(std::vector<double>{h.eval(std::vector<double>{x + 0.5})});
    EXPECT_NEAR(a, b, 1e-15);
  }
}

TEST(GeneratorNet, MatchesBasis1D) {
  Rng rng(2);
  for (std::int64_t k = 1; k <= 40; ++k)
    for (auto kind : {BasisKind::Cos, BasisKind::Sin}) {
      const auto net = build_generator_net(kind, MultiIndex{k});
      EXPECT_EQ(net.width(), 2);
      const std::int64_t n = kind == BasisKind::Cos ? k : k + 1;
      EXPECT_EQ(net.depth(), static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) + 1);
      for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform();
        EXPECT_NEAR(net.eval(std::vector<double>{x}), eval_scalar(kind, static_cast<double>(k) * x), 1e-12);
      }
    }
  EXPECT_EQ(build_generator_net(BasisKind::Cos, MultiIndex{1}).eval(std::vector<double>{0.0}), 1.0);
  EXPECT_THROW(build_generator_net(BasisKind::Cos, MultiIndex{0, 0}), DomainError);
}

TEST(GeneratorNet, MultivariateDepthBound) {
  const auto net = build_generator_net(BasisKind::Cos, MultiIndex{3, 1});
  EXPECT_LE(net.depth(), 4 + std::log2(4.0));
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + trial % 5;
    std::vector<std::int64_t> kv(static_cast<std::size_t>(d));
    for (auto& v : kv) v = rng.uniform_int(-6, 6);
    MultiIndex k(kv);
    if (k.is_zero()) continue;
    if (!is_positive_leading(k)) k = -k;
    for (auto kind : {BasisKind::Cos, BasisKind::Sin}) {
      const auto g = build_generator_net(kind, k);
      EXPECT_LE(g.depth(), 4 + std::log2(static_cast<double>(k.norm1())));
      for (int i = 0; i < 200; ++i) {
        const auto x = random_point(rng, d);
        EXPECT_NEAR(g.eval(x), eval_scalar(kind, dot(k, x)), 1e-11);
      }
    }
  }
}

TEST(PadDepth, PreservesValues) {
  const auto h = build_hat();
  EXPECT_EQ(serialize(pad_depth(h, 1)), serialize(h));
  // The hat is in [0,1], so the carry channel applies.
  const auto p = pad_depth(h, 4);
  EXPECT_EQ(p.depth(), 4);
  EXPECT_LE(p.width(), 2);
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform();
    EXPECT_NEAR(p.eval(std::vector<double>{x}), h.eval(std::vector<double>{x}), 1e-15);
  }
  EXPECT_THROW(pad_depth(p, 2), UsageError);
}

TEST(Stacked, SingleGenerator) {
  RieszCoeffs c(1);
  c.add(MultiIndex{1}, 1.0, 0.0);
  const auto net = build_stacked(c);
  EXPECT_LE(net.width(), 4);
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform();
    EXPECT_NEAR(net.eval(std::vector<double>{x}), eval_scalar(BasisKind::Cos, x), 1e-12);
  }
}

TEST(Stacked, TwoIndices) {
  Rng rng(6);
  RieszCoeffs c(2, 0.3);
  c.add(MultiIndex{1, 0}, rng.normal(), rng.normal());
  c.add(MultiIndex{1, 1}, rng.normal(), rng.normal());
  const auto net = build_stacked(c);
  EXPECT_LE(net.width(), 8);
  for (int i = 0; i < 1000; ++i) {
    const auto x = random_point(rng, 2);
    EXPECT_NEAR(net.eval(x), direct_sum(c, x), 1e-11);
  }
  double cmax = 1.0;
  for (const auto& [k, cp] : c.terms) cmax = std::max({cmax, std::abs(cp.c), std::abs(cp.s)});
  EXPECT_LE(max_abs_weight(net), 8 * cmax);
}

TEST(Inline, WidthIsDPlus3) {
  Rng rng(7);
  for (int d = 1; d <= 5; ++d) {
    const auto c = random_coeffs(rng, d, 3.0, 6);
    const auto net = build_inline(c);
    EXPECT_EQ(net.width(), d + 3);
    EXPECT_LE(net.depth(), inline_depth_bound(c.terms.size(), [&] {
                std::int64_t m = 0;
                for (const auto& [k, cp] : c.terms) m = std::max(m, k.norm1());
                return m;
              }()));
  }
}

TEST(Architectures, ExactAndAgree) {
  Rng rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 5;
    const auto c = random_coeffs(rng, d, 10.0, 12);
    const auto s = build_stacked(c);
    const auto in = build_inline(c);
    for (int i = 0; i < 300; ++i) {
      const auto x = random_point(rng, d);
      const double ref = direct_sum(c, x);
      EXPECT_NEAR(s.eval(x), ref, 1e-9);
      EXPECT_NEAR(in.eval(x), ref, 1e-9);
      EXPECT_NEAR(s.eval(x), in.eval(x), 1e-11);
    }
    EXPECT_TRUE(audit_network(s).ok());
    EXPECT_TRUE(audit_network(in).ok());
    EXPECT_LE(nonzero_params(s), param_count(4 * c.terms.size(), s.depth(), d));
  }
}

TEST(Architectures, ConstantOnly) {
  const auto net = build_network(RieszCoeffs(3, 2.5), Architecture::Stacked);
  EXPECT_EQ(net.eval(std::vector<double>{0.1, 0.2, 0.3}), 2.5);
  EXPECT_EQ(net.width(), 1);
  EXPECT_EQ(net.depth(), 1);
  EXPECT_THROW(build_stacked(RieszCoeffs(1, 1.0)), UsageError);
  EXPECT_THROW(build_inline(RieszCoeffs(1, 1.0)), UsageError);
}

TEST(Architectures, PiecewiseLinearAlongSegments) {
  Rng rng(9);
  const auto c = random_coeffs(rng, 2, 4.0, 5);
  const auto net = build_stacked(c);
  const auto a = random_point(rng, 2);
  const auto b = random_point(rng, 2);
  const int n = 1 << 12;
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    v[i] = net.eval(std::vector<double>{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
  }
  // Breakpoints: each generator C(k.x) or S(k.x) kinks where k.x crosses a multiple of 1/4 (C: 1/2).
  std::int64_t kinks = 0;
  for (const auto& [k, cp] : c.terms) {
    const double span = std::abs(dot(k, b) - dot(k, a));
    kinks += 2 * (static_cast<std::int64_t>(std::ceil(4 * span)) + 1);
  }
  int nonlinear = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(v[i + 1] - 2 * v[i] + v[i - 1]) > 1e-9) ++nonlinear;
  EXPECT_LE(nonlinear, 2 * kinks);
}

TEST(ParamCount, Formula) {
  EXPECT_EQ(param_count(4, 3, 2), 57u);
  EXPECT_EQ(param_count(2, 1, 1), 7u);
  EXPECT_THROW(param_count(0, 1, 1), DomainError);
  EXPECT_THROW(param_count(1ull << 40, 1ull << 40, 1), std::overflow_error);
}

TEST(Serialize, HatRoundTrip) {
  const auto h = build_hat();
  const auto text = serialize(h);
  const auto back = deserialize(text);
  EXPECT_EQ(serialize(back), text);
  EXPECT_EQ(back.eval(std::vector<double>{0.5}), 1.0);
}

TEST(Serialize, HandWrittenHat) {
  const std::string doc = R"({"format_version": 1, "dim_in": 1, "width": 2, "depth": 1, "activation": "relu",
    "layers": [{"weights": [[1], [1]], "bias": [0, -0.5]}, {"weights": [[2, -4]], "bias": [0]}]})";
  EXPECT_EQ(deserialize(doc).eval(std::vector<double>{0.5}), 1.0);
}

TEST(Serialize, Errors) {
  const auto text = serialize(build_hat());
  EXPECT_THROW(deserialize(text.substr(0, text.size() / 2)), ParseError);
  std::string bad_depth = text;
  bad_depth.replace(bad_depth.find("\"depth\":1"), 9, "\"depth\":2");
  EXPECT_THROW(deserialize(bad_depth), ValidationError);
  const std::string bad_shape = R"({"format_version": 1, "dim_in": 1, "width": 2, "depth": 1, "activation": "relu",
    "layers": [{"weights": [[1], [1]], "bias": [0, -0.5]}, {"weights": [[2, -4, 1]], "bias": [0]}]})";
  EXPECT_THROW(deserialize(bad_shape), ValidationError);
  const std::string bad_row = R"({"format_version": 1, "dim_in": 1, "width": 2, "depth": 1, "activation": "relu",
    "layers": [{"weights": [[1], [1, 2]], "bias": [0, -0.5]}, {"weights": [[2, -4]], "bias": [0]}]})";
  try {
    deserialize(bad_row);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("$.layers[0].weights[1]"), std::string::npos);
  }
}

TEST(Serialize, BitwiseRoundTripOfRandomNets) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 4;
    const auto c = random_coeffs(rng, d, 5.0, 6);
    const auto net = build_network(c, trial % 2 ? Architecture::Inline : Architecture::Stacked);
    const auto back = deserialize(serialize(net));
    ASSERT_EQ(back.layers().size(), net.layers().size());
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
      const auto& a = net.layers()[l];
      const auto& b = back.layers()[l];
      ASSERT_EQ(a.weights.size(), b.weights.size());
      EXPECT_EQ(std::memcmp(a.weights.data(), b.weights.data(), sizeof(double) * a.weights.size()), 0);
      EXPECT_EQ(std::memcmp(a.bias.data(), b.bias.data(), sizeof(double) * a.bias.size()), 0);
    }
    EXPECT_EQ(back.metadata().coefficients, net.metadata().coefficients);
    for (int i = 0; i < 100; ++i) {
      const auto x = random_point(rng, d);
      const double u = net.eval(x), v = back.eval(x);
      EXPECT_EQ(std::memcmp(&u, &v, sizeof u), 0);
    }
  }
}

TEST(Audit, DetectsCorruption) {
  RieszCoeffs c(2);
  c.add(MultiIndex{1, 1}, 1.0, 0.5);
  auto layers = build_stacked(c).layers();
  layers[0].weights(0, 0) += 0.25;
  NetworkMetadata meta = build_stacked(c).metadata();
  const ReluNetwork bad(2, layers, meta);
  const auto audit = audit_network(bad);
  EXPECT_FALSE(audit.exact_ok);
  EXPECT_FALSE(audit.ok());
  layers = build_stacked(c).layers();
  layers[1].weights(0, 0) = 100.0;
  EXPECT_FALSE(audit_network(ReluNetwork(2, layers, meta)).weight_ok);
}

TEST(Eval, BatchMatchesPointwise) {
  Rng rng(11);
  const auto c = random_coeffs(rng, 3, 4.0, 5);
  const auto net = build_stacked(c);
  Eigen::MatrixXd X(3, 50);
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    for (Eigen::Index i = 0; i < 3; ++i) X(i, j) = rng.uniform();
  const auto y = net.eval_batch(X);
  for (Eigen::Index j = 0; j < X.cols(); ++j) EXPECT_NEAR(y(j), net.eval(Eigen::VectorXd(X.col(j))), 1e-13);
  EXPECT_THROW(net.eval_batch(Eigen::MatrixXd(2, 1)), DimensionError);
  EXPECT_THROW(net.eval(std::vector<double>{0.1}), DimensionError);
}
