#include "reluriesz/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "reluriesz/coeff_io.hpp"
#include "reluriesz/errors.hpp"
#include "reluriesz/rng.hpp"

namespace reluriesz {

namespace {

using nlohmann::json;

AffineMap make_affine(Eigen::Index out, Eigen::Index in) {
  return {Eigen::MatrixXd::Zero(out, in), Eigen::VectorXd::Zero(out)};
}

AffineMap identity_map(Eigen::Index n) { return {Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n)}; }

struct Term {
  BasisId id;
  double coef;
};

std::vector<Term> collect_terms(const RieszCoeffs& coeffs) {
  std::vector<Term> out;
  for (const auto& [k, cp] : coeffs.terms) {
    if (cp.c != 0.0) out.push_back({BasisId::cos(k), cp.c});
    if (cp.s != 0.0) out.push_back({BasisId::sin(k), cp.s});
  }
  return out;
}

std::int64_t max_l1(const RieszCoeffs& coeffs) {
  std::int64_t out = 0;
  for (const auto& [k, cp] : coeffs.terms) out = std::max(out, k.norm1());
  return out;
}

void check_finite(const AffineMap& a, std::size_t layer) {
  if (!a.weights.allFinite() || !a.bias.allFinite())
    throw ValidationError("layer " + std::to_string(layer) + " has non-finite entries");
}

}  // namespace

std::string architecture_name(Architecture arch) {
  switch (arch) {
    case Architecture::Atomic: return "atomic";
    case Architecture::Stacked: return "stacked";
    case Architecture::Inline: return "inline";
  }
  return "?";
}

Architecture parse_architecture(const std::string& name) {
  if (name == "atomic") return Architecture::Atomic;
  if (name == "stacked") return Architecture::Stacked;
  if (name == "inline") return Architecture::Inline;
  throw UsageError("unknown architecture '" + name + "' (expected stacked or inline)");
}

ReluNetwork::ReluNetwork(int dim_in, std::vector<AffineMap> layers, NetworkMetadata metadata)
    : dim_in_(dim_in), layers_(std::move(layers)), metadata_(std::move(metadata)) {
  if (dim_in_ < 1) throw ValidationError("network input dimension must be at least 1");
  if (layers_.size() < 2) throw ValidationError("network needs at least one hidden layer");
  Eigen::Index expected = dim_in_;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& a = layers_[i];
    if (a.in_width() != expected)
      throw ValidationError("layer " + std::to_string(i) + " expects input width " + std::to_string(a.in_width()) +
                            " but receives " + std::to_string(expected));
    if (a.bias.size() != a.out_width())
      throw ValidationError("layer " + std::to_string(i) + " bias length does not match its output width");
    if (a.out_width() < 1) throw ValidationError("layer " + std::to_string(i) + " has zero width");
    check_finite(a, i);
    expected = a.out_width();
  }
  if (expected != 1) throw ValidationError("network output width must be 1");
}

int ReluNetwork::width() const {
  Eigen::Index w = 0;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) w = std::max(w, layers_[i].out_width());
  return static_cast<int>(w);
}

double ReluNetwork::eval(const Eigen::VectorXd& x) const {
  if (x.size() != dim_in_) throw DimensionError("eval: expected a point of dimension " + std::to_string(dim_in_));
  Eigen::VectorXd h = x;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i)
    h = (layers_[i].weights * h + layers_[i].bias).cwiseMax(0.0);
  const auto& out = layers_.back();
  return (out.weights * h + out.bias)(0);
}

Eigen::VectorXd ReluNetwork::eval_batch(const Eigen::MatrixXd& points) const {
  if (points.rows() != dim_in_) throw DimensionError("eval_batch: expected points of dimension " + std::to_string(dim_in_));
  Eigen::MatrixXd h = points;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i)
    h = ((layers_[i].weights * h).colwise() + layers_[i].bias).cwiseMax(0.0);
  const auto& out = layers_.back();
  return ((out.weights * h).colwise() + out.bias).row(0).transpose();
}

double ReluNetwork::eval(std::span<const double> x) const {
  return eval(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())).eval());
}

ReluNetwork build_hat() {
  AffineMap hidden = make_affine(2, 1);
  hidden.weights << 1.0, 1.0;
  hidden.bias << 0.0, -0.5;
  AffineMap out = make_affine(1, 2);
  out.weights << 2.0, -4.0;
  return ReluNetwork(1, {hidden, out});
}

ReluNetwork build_generator_net(BasisKind kind, const MultiIndex& k) {
  if (kind == BasisKind::Const) throw DomainError("build_generator_net: kind must be cos or sin");
  if (k.dim() == 0 || k.is_zero()) throw DomainError("build_generator_net: k must be nonzero");
  const std::int64_t K = k.norm1();
  std::int64_t lo = 0;
  for (auto v : k.entries()) lo += std::min<std::int64_t>(v, 0);
  // u = (k.x - lo + shift) / n lies in [0,1] on the cube and C(n u) = C(k.x + shift).
  const std::int64_t n0 = kind == BasisKind::Cos ? K : K + 1;
  const double shift = kind == BasisKind::Cos ? 0.0 : 0.75;
  const double denom = static_cast<double>(n0);

  // Tent stages: each halves the frequency, n -> ceil(n/2).
  std::vector<double> offsets;
  std::vector<std::pair<double, double>> mix;
  for (std::int64_t n = n0; n >= 2;) {
    const std::int64_t m = (n + 1) / 2;
    offsets.push_back(static_cast<double>(m) / static_cast<double>(n));
    const double r = static_cast<double>(n) / static_cast<double>(m);
    mix.emplace_back(r, -2.0 * r);
    n = m;
  }
  offsets.push_back(0.5);

  const auto d = static_cast<Eigen::Index>(k.dim());
  std::vector<AffineMap> layers;
  AffineMap first = make_affine(2, d);
  const double base = (static_cast<double>(-lo) + shift) / denom;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double w = static_cast<double>(k[static_cast<std::size_t>(i)]) / denom;
    first.weights(0, i) = w;
    first.weights(1, i) = w;
  }
  first.bias << base, base - offsets[0];
  layers.push_back(std::move(first));
  for (std::size_t j = 1; j < offsets.size(); ++j) {
    AffineMap a = make_affine(2, 2);
    a.weights << mix[j - 1].first, mix[j - 1].second, mix[j - 1].first, mix[j - 1].second;
    a.bias << 0.0, -offsets[j];
    layers.push_back(std::move(a));
  }
  AffineMap out = make_affine(1, 2);
  out.weights << -4.0, 8.0;
  out.bias << 1.0;
  layers.push_back(std::move(out));

  NetworkMetadata meta;
  meta.realized.push_back(kind == BasisKind::Cos ? BasisId::cos(k) : BasisId::sin(k));
  return ReluNetwork(static_cast<int>(d), std::move(layers), std::move(meta));
}

ReluNetwork pad_depth(const ReluNetwork& net, int target_depth) {
  if (target_depth < net.depth()) throw UsageError("pad_depth: target depth is below the current depth");
  if (target_depth == net.depth()) return net;
  std::vector<AffineMap> layers(net.layers().begin(), net.layers().end() - 1);
  AffineMap carry = net.layers().back();
  carry.bias.array() += 1.0;
  layers.push_back(std::move(carry));
  for (int i = net.depth() + 1; i < target_depth; ++i) layers.push_back(identity_map(1));
  AffineMap out = identity_map(1);
  out.bias(0) = -1.0;
  layers.push_back(std::move(out));
  return ReluNetwork(net.dim_in(), std::move(layers), net.metadata());
}

ReluNetwork build_constant(int dim, double value) {
  if (dim < 1) throw DimensionError("build_constant: dimension must be at least 1");
  AffineMap hidden = make_affine(1, dim);
  AffineMap out = make_affine(1, 1);
  out.bias(0) = value;
  NetworkMetadata meta;
  meta.coefficients = RieszCoeffs(dim, value);
  return ReluNetwork(dim, {hidden, out}, std::move(meta));
}

ReluNetwork build_stacked(const RieszCoeffs& coeffs) {
  coeffs.validate();
  const auto terms = collect_terms(coeffs);
  if (terms.empty()) throw UsageError("build_stacked: empty support");
  std::vector<ReluNetwork> subnets;
  int depth = 0;
  for (const auto& t : terms) {
    subnets.push_back(build_generator_net(t.id.kind, t.id.index));
    depth = std::max(depth, subnets.back().depth());
  }
  for (auto& net : subnets) net = pad_depth(net, depth);

  const Eigen::Index d = coeffs.dim;
  std::vector<AffineMap> layers;
  for (int l = 0; l < depth; ++l) {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    for (const auto& net : subnets) {
      rows += net.layers()[static_cast<std::size_t>(l)].out_width();
      cols += net.layers()[static_cast<std::size_t>(l)].in_width();
    }
    AffineMap a = make_affine(rows, l == 0 ? d : cols);
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    for (const auto& net : subnets) {
      const auto& src = net.layers()[static_cast<std::size_t>(l)];
      if (l == 0) {
        a.weights.block(r, 0, src.out_width(), d) = src.weights;
      } else {
        a.weights.block(r, c, src.out_width(), src.in_width()) = src.weights;
      }
      a.bias.segment(r, src.out_width()) = src.bias;
      r += src.out_width();
      c += src.in_width();
    }
    layers.push_back(std::move(a));
  }

  NetworkMetadata meta;
  meta.architecture = Architecture::Stacked;
  meta.coefficients = coeffs;
  AffineMap out = make_affine(1, layers.back().out_width());
  out.bias(0) = coeffs.constant;
  Eigen::Index c = 0;
  for (std::size_t j = 0; j < subnets.size(); ++j) {
    const auto& src = subnets[j].layers().back();
    out.weights.block(0, c, 1, src.in_width()) = terms[j].coef * src.weights;
    out.bias(0) += terms[j].coef * src.bias(0);
    meta.realized.push_back(terms[j].id);
    meta.output_columns.push_back(c);
    c += src.in_width();
  }
  layers.push_back(std::move(out));
  return ReluNetwork(coeffs.dim, std::move(layers), std::move(meta));
}

ReluNetwork build_inline(const RieszCoeffs& coeffs) {
  coeffs.validate();
  const auto terms = collect_terms(coeffs);
  if (terms.empty()) throw UsageError("build_inline: empty support");
  const Eigen::Index d = coeffs.dim;
  const Eigen::Index width = d + 3;
  const Eigen::Index col = d;  // collation channel
  const Eigen::Index w0 = d + 1;

  double shift = std::abs(coeffs.constant);
  for (const auto& t : terms) shift += std::abs(t.coef);

  std::vector<ReluNetwork> chains;
  for (const auto& t : terms) chains.push_back(build_generator_net(t.id.kind, t.id.index));

  std::vector<AffineMap> layers;
  for (std::size_t j = 0; j < chains.size(); ++j) {
    const auto& g = chains[j].layers();
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
      const bool first_overall = j == 0 && i == 0;
      AffineMap a = make_affine(width, first_overall ? d : width);
      a.weights.block(0, 0, d, d).setIdentity();
      if (i == 0) {
        // Start term j from the source channels.
        a.weights.block(w0, 0, 2, d) = g[0].weights;
        a.bias.segment(w0, 2) = g[0].bias;
      } else {
        a.weights.block(w0, w0, 2, 2) = g[i].weights;
        a.bias.segment(w0, 2) = g[i].bias;
      }
      if (first_overall) {
        a.bias(col) = shift + coeffs.constant;
      } else {
        a.weights(col, col) = 1.0;
        if (i == 0) {
          // Collate the finished term j-1 while term j starts.
          const auto& prev_out = chains[j - 1].layers().back();
          a.weights.block(col, w0, 1, 2) = terms[j - 1].coef * prev_out.weights;
          a.bias(col) = terms[j - 1].coef * prev_out.bias(0);
        }
      }
      layers.push_back(std::move(a));
    }
  }
  const auto& last_out = chains.back().layers().back();
  AffineMap out = make_affine(1, width);
  out.weights(0, col) = 1.0;
  out.weights.block(0, w0, 1, 2) = terms.back().coef * last_out.weights;
  out.bias(0) = terms.back().coef * last_out.bias(0) - shift;
  layers.push_back(std::move(out));

  NetworkMetadata meta;
  meta.architecture = Architecture::Inline;
  meta.coefficients = coeffs;
  meta.collation_shift = shift;
  for (const auto& t : terms) meta.realized.push_back(t.id);
  return ReluNetwork(coeffs.dim, std::move(layers), std::move(meta));
}

ReluNetwork build_network(const RieszCoeffs& coeffs, Architecture arch) {
  if (collect_terms(coeffs).empty()) {
    coeffs.validate();
    return build_constant(coeffs.dim, coeffs.constant);
  }
  switch (arch) {
    case Architecture::Stacked: return build_stacked(coeffs);
    case Architecture::Inline: return build_inline(coeffs);
    case Architecture::Atomic: break;
  }
  throw UsageError("build_network: architecture must be stacked or inline");
}

std::uint64_t param_count(std::uint64_t W, std::uint64_t L, std::uint64_t d) {
  if (W < 1 || L < 1 || d < 1) throw DomainError("param_count: W, L and d must be positive");
  auto mul = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("param_count overflow");
    return r;
  };
  auto add = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("param_count overflow");
    return r;
  };
  return add(add(mul(W, d + 1), mul(mul(L - 1, W), W + 1)), W + 1);
}

std::uint64_t nonzero_params(const ReluNetwork& net) {
  std::uint64_t count = 0;
  for (const auto& a : net.layers())
    count += static_cast<std::uint64_t>((a.weights.array() != 0.0).count() + (a.bias.array() != 0.0).count());
  return count;
}

double max_abs_weight(const ReluNetwork& net) {
  double out = 0.0;
  const auto& layers = net.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    out = std::max(out, layers[i].weights.cwiseAbs().maxCoeff());
    if (i + 1 < layers.size()) out = std::max(out, layers[i].bias.cwiseAbs().maxCoeff());
  }
  return out;
}

int stacked_width_bound(std::size_t support_size) { return static_cast<int>(4 * support_size); }

double stacked_depth_bound(std::int64_t max_l1) { return 4.0 + std::log2(static_cast<double>(max_l1)); }

int inline_width_bound(int dim) { return dim + 3; }

double inline_depth_bound(std::size_t support_size, std::int64_t max_l1) {
  return 2.0 * static_cast<double>(support_size) * std::log2(16.0 * static_cast<double>(max_l1));
}

NetworkAudit audit_network(const ReluNetwork& net, std::size_t n_points, std::uint64_t seed, double tolerance) {
  NetworkAudit audit;
  const auto& meta = net.metadata();
  auto fail = [&](bool& flag, std::string msg) {
    flag = false;
    audit.messages.push_back(std::move(msg));
  };
  if (meta.coefficients && !collect_terms(*meta.coefficients).empty()) {
    const auto& c = *meta.coefficients;
    const auto support = c.terms.size();
    const auto l1 = max_l1(c);
    if (meta.architecture == Architecture::Stacked) {
      if (net.width() > stacked_width_bound(support))
        fail(audit.width_ok, "width " + std::to_string(net.width()) + " exceeds 4*#I = " + std::to_string(stacked_width_bound(support)));
      if (net.depth() > stacked_depth_bound(l1))
        fail(audit.depth_ok, "depth " + std::to_string(net.depth()) + " exceeds 4 + log2(max ||k||_1)");
      double cmax = 1.0;
      for (const auto& [k, cp] : c.terms) cmax = std::max({cmax, std::abs(cp.c), std::abs(cp.s)});
      if (max_abs_weight(net) > 8.0 * cmax * (1.0 + 1e-12))
        fail(audit.weight_ok, "max |weight| exceeds 8*max{1,|coefficient|}");
    } else if (meta.architecture == Architecture::Inline) {
      if (net.width() != inline_width_bound(net.dim_in()))
        fail(audit.width_ok, "width " + std::to_string(net.width()) + " differs from d+3");
      if (net.depth() > inline_depth_bound(support, l1))
        fail(audit.depth_ok, "depth " + std::to_string(net.depth()) + " exceeds 2*#I*log2(16 max ||k||_1)");
    }
  } else if (meta.realized.size() == 1 && meta.realized[0].kind != BasisKind::Const) {
    const auto& id = meta.realized[0];
    if (net.width() > 2) fail(audit.width_ok, "generator net wider than 2");
    if (net.depth() > stacked_depth_bound(id.index.norm1())) fail(audit.depth_ok, "generator net deeper than 4 + log2 ||k||_1");
  }

  if (!meta.coefficients && meta.realized.empty()) {
    audit.max_exactness_error = std::numeric_limits<double>::quiet_NaN();
    return audit;
  }
  RieszCoeffs reference(net.dim_in());
  if (meta.coefficients) {
    reference = *meta.coefficients;
  } else if (meta.realized.size() == 1) {
    const auto& id = meta.realized[0];
    reference.add(id.index, id.kind == BasisKind::Cos ? 1.0 : 0.0, id.kind == BasisKind::Sin ? 1.0 : 0.0);
  } else {
    audit.max_exactness_error = std::numeric_limits<double>::quiet_NaN();
    return audit;
  }
  Rng rng(derive_seed(seed, "audit_network"));
  std::vector<double> x(static_cast<std::size_t>(net.dim_in()));
  double worst = 0.0;
  for (std::size_t i = 0; i < n_points; ++i) {
    for (auto& v : x) v = rng.uniform();
    worst = std::max(worst, std::abs(net.eval(x) - evaluate(reference, x)));
  }
  audit.max_exactness_error = worst;
  if (!(worst <= tolerance)) fail(audit.exact_ok, "exactness error " + std::to_string(worst) + " above tolerance");
  return audit;
}

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json basis_id_json(const BasisId& id) {
  json k = json::array();
  for (auto v : id.index.entries()) k.push_back(v);
  return {{"kind", kind_name(id.kind)}, {"k", std::move(k)}};
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + ": missing field '" + key + "'");
  return *it;
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path + ": expected a number");
  return v.get<double>();
}

std::int64_t integer_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path + ": expected an integer");
  return v.get<std::int64_t>();
}

}  // namespace

std::string serialize(const ReluNetwork& net) {
  json layers = json::array();
  for (const auto& a : net.layers()) {
    json bias = json::array();
    for (Eigen::Index i = 0; i < a.bias.size(); ++i) bias.push_back(a.bias(i));
    layers.push_back({{"weights", matrix_json(a.weights)}, {"bias", std::move(bias)}});
  }
  const auto& m = net.metadata();
  json realized = json::array();
  for (const auto& id : m.realized) realized.push_back(basis_id_json(id));
  json meta = {{"architecture", architecture_name(m.architecture)},
               {"realized", std::move(realized)},
               {"coefficients", m.coefficients ? json::parse(to_json(*m.coefficients)) : json(nullptr)},
               {"collation_shift", m.collation_shift},
               {"output_columns", m.output_columns}};
  json doc = {{"format_version", 1},
              {"dim_in", net.dim_in()},
              {"width", net.width()},
              {"depth", net.depth()},
              {"activation", "relu"},
              {"layers", std::move(layers)},
              {"metadata", std::move(meta)}};
  return doc.dump() + "\n";
}

ReluNetwork deserialize(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed network document: ") + e.what());
  }
  if (integer_at(field(doc, "format_version", "$"), "$.format_version") != 1)
    throw ParseError("$.format_version: unsupported version");
  const json& act = field(doc, "activation", "$");
  if (!act.is_string() || act.get<std::string>() != "relu") throw ParseError("$.activation: only \"relu\" is supported");
  const auto dim_in = integer_at(field(doc, "dim_in", "$"), "$.dim_in");
  const auto width = integer_at(field(doc, "width", "$"), "$.width");
  const auto depth = integer_at(field(doc, "depth", "$"), "$.depth");
  const json& layers_v = field(doc, "layers", "$");
  if (!layers_v.is_array()) throw ParseError("$.layers: expected an array");

  std::vector<AffineMap> layers;
  for (std::size_t l = 0; l < layers_v.size(); ++l) {
    const std::string path = "$.layers[" + std::to_string(l) + "]";
    const json& w = field(layers_v[l], "weights", path);
    const json& b = field(layers_v[l], "bias", path);
    if (!w.is_array() || w.empty()) throw ParseError(path + ".weights: expected a nonempty array of rows");
    if (!b.is_array()) throw ParseError(path + ".bias: expected an array");
    const auto rows = static_cast<Eigen::Index>(w.size());
    if (!w[0].is_array()) throw ParseError(path + ".weights[0]: expected an array");
    const auto cols = static_cast<Eigen::Index>(w[0].size());
    AffineMap a = make_affine(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const std::string rpath = path + ".weights[" + std::to_string(i) + "]";
      const json& row = w[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
        throw ParseError(rpath + ": expected " + std::to_string(cols) + " entries");
      for (Eigen::Index j = 0; j < cols; ++j)
        a.weights(i, j) = number_at(row[static_cast<std::size_t>(j)], rpath + "[" + std::to_string(j) + "]");
    }
    if (static_cast<Eigen::Index>(b.size()) != rows) throw ValidationError(path + ".bias: length differs from the number of weight rows");
    for (Eigen::Index i = 0; i < rows; ++i)
      a.bias(i) = number_at(b[static_cast<std::size_t>(i)], path + ".bias[" + std::to_string(i) + "]");
    layers.push_back(std::move(a));
  }

  NetworkMetadata meta;
  if (auto it = doc.find("metadata"); it != doc.end() && !it->is_null()) {
    const json& m = *it;
    if (!m.is_object()) throw ParseError("$.metadata: expected an object");
    if (auto a = m.find("architecture"); a != m.end()) {
      if (!a->is_string()) throw ParseError("$.metadata.architecture: expected a string");
      try {
        meta.architecture = parse_architecture(a->get<std::string>());
      } catch (const UsageError& e) {
        throw ParseError(std::string("$.metadata.architecture: ") + e.what());
      }
    }
    if (auto r = m.find("realized"); r != m.end()) {
      if (!r->is_array()) throw ParseError("$.metadata.realized: expected an array");
      for (std::size_t i = 0; i < r->size(); ++i) {
        const std::string path = "$.metadata.realized[" + std::to_string(i) + "]";
        const json& kind_v = field((*r)[i], "kind", path);
        const json& k_v = field((*r)[i], "k", path);
        if (!kind_v.is_string()) throw ParseError(path + ".kind: expected a string");
        if (!k_v.is_array()) throw ParseError(path + ".k: expected an array");
        std::vector<std::int64_t> k;
        for (std::size_t j = 0; j < k_v.size(); ++j) k.push_back(integer_at(k_v[j], path + ".k[" + std::to_string(j) + "]"));
        BasisKind kind;
        try {
          kind = parse_kind(kind_v.get<std::string>());
        } catch (const std::exception& e) {
          throw ParseError(path + ".kind: " + e.what());
        }
        if (kind == BasisKind::Const) {
          meta.realized.push_back(BasisId::constant());
        } else {
          MultiIndex idx(std::move(k));
          meta.realized.push_back(kind == BasisKind::Cos ? BasisId::cos(idx) : BasisId::sin(idx));
        }
      }
    }
    if (auto c = m.find("coefficients"); c != m.end() && !c->is_null()) {
      try {
        meta.coefficients = parse_riesz_coeffs(c->dump());
      } catch (const ParseError& e) {
        throw ParseError(std::string("$.metadata.coefficients: ") + e.what());
      }
    }
    if (auto s = m.find("collation_shift"); s != m.end()) meta.collation_shift = number_at(*s, "$.metadata.collation_shift");
    if (auto oc = m.find("output_columns"); oc != m.end()) {
      if (!oc->is_array()) throw ParseError("$.metadata.output_columns: expected an array");
      for (std::size_t i = 0; i < oc->size(); ++i)
        meta.output_columns.push_back(integer_at((*oc)[i], "$.metadata.output_columns[" + std::to_string(i) + "]"));
    }
  }

  if (dim_in < 1 || dim_in > std::numeric_limits<int>::max()) throw ValidationError("$.dim_in: must be a positive integer");
  ReluNetwork net(static_cast<int>(dim_in), std::move(layers), std::move(meta));
  if (net.depth() != depth)
    throw ValidationError("$.depth: declared " + std::to_string(depth) + " but the layers give " + std::to_string(net.depth()));
  if (net.width() != width)
    throw ValidationError("$.width: declared " + std::to_string(width) + " but the layers give " + std::to_string(net.width()));
  return net;
}

}  // namespace reluriesz
