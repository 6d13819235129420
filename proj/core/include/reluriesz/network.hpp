#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "reluriesz/basis.hpp"
#include "reluriesz/spectrum.hpp"

namespace reluriesz {

struct AffineMap {
  Eigen::MatrixXd weights;  // rows = output width, cols = input width
  Eigen::VectorXd bias;

  Eigen::Index in_width() const { return weights.cols(); }
  Eigen::Index out_width() const { return weights.rows(); }
};

enum class Architecture { Atomic, Stacked, Inline };

std::string architecture_name(Architecture arch);
Architecture parse_architecture(const std::string& name);

struct NetworkMetadata {
  Architecture architecture = Architecture::Atomic;
  /// Basis functions realized by the net, in assembly order.
  std::vector<BasisId> realized;
  /// Coefficients the net was built from; used by exactness audits.
  std::optional<RieszCoeffs> coefficients;
  /// Inline nets: shift B0 keeping the collation channel nonnegative.
  double collation_shift = 0.0;
  /// Stacked nets: first output-layer column of each realized subnet.
  std::vector<std::int64_t> output_columns;
};

/// x -> A_L(ReLU(A_{L-1}(... ReLU(A_0 x)))). Depth L = number of affine maps - 1 >= 1.
class ReluNetwork {
 public:
  /// Throws ValidationError on inconsistent shapes, non-finite entries or L < 1.
  ReluNetwork(int dim_in, std::vector<AffineMap> layers, NetworkMetadata metadata = {});

  int dim_in() const { return dim_in_; }
  int depth() const { return static_cast<int>(layers_.size()) - 1; }
  /// Maximum hidden width.
  int width() const;
  const std::vector<AffineMap>& layers() const { return layers_; }
  const NetworkMetadata& metadata() const { return metadata_; }

  double eval(std::span<const double> x) const;
  double eval(const Eigen::VectorXd& x) const;
  /// One point per column; results may differ from eval in the last bits.
  Eigen::VectorXd eval_batch(const Eigen::MatrixXd& points) const;

 private:
  int dim_in_;
  std::vector<AffineMap> layers_;
  NetworkMetadata metadata_;
};

/// H(x) = (2, -4) ReLU((1; 1) x + (0; -1/2)).
ReluNetwork build_hat();

/// Width-2 net computing C(k.x) or S(k.x) exactly on [0,1]^d, with
/// ceil(log2 n) + 1 hidden layers where n = ||k||_1 (Cos) or ||k||_1 + 1 (Sin).
ReluNetwork build_generator_net(BasisKind kind, const MultiIndex& k);

/// Extends the depth to target_depth through a single carry channel
/// ReLU(y + 1); requires the output to stay in [-1, 1] on the domain.
ReluNetwork pad_depth(const ReluNetwork& net, int target_depth);

/// Parallel subnets, one per realized C_k / S_k; coefficients live only in the output layer.
ReluNetwork build_stacked(const RieszCoeffs& coeffs);
/// Width d + 3: source channels, collation channel and two working channels.
ReluNetwork build_inline(const RieszCoeffs& coeffs);
/// The constant function on [0,1]^d as a width-1, depth-1 net.
ReluNetwork build_constant(int dim, double value);
/// Dispatches on the architecture; constant-only input yields build_constant.
ReluNetwork build_network(const RieszCoeffs& coeffs, Architecture arch);

/// W(d+1) + (L-1) W (W+1) + W + 1; throws std::overflow_error on overflow.
std::uint64_t param_count(std::uint64_t W, std::uint64_t L, std::uint64_t d);
std::uint64_t nonzero_params(const ReluNetwork& net);
/// Largest |entry| over all weight matrices and hidden biases (the output bias is excluded).
double max_abs_weight(const ReluNetwork& net);

/// Structural limits for nets built from a support of size support_size with
/// max_l1 = max ||k||_1.
int stacked_width_bound(std::size_t support_size);
double stacked_depth_bound(std::int64_t max_l1);
int inline_width_bound(int dim);
double inline_depth_bound(std::size_t support_size, std::int64_t max_l1);

struct NetworkAudit {
  bool width_ok = true;
  bool depth_ok = true;
  bool weight_ok = true;
  /// Max |net - snapshot| at the sampled points; NaN if there is no snapshot.
  double max_exactness_error = 0.0;
  bool exact_ok = true;
  std::vector<std::string> messages;
  bool ok() const { return width_ok && depth_ok && weight_ok && exact_ok; }
};

NetworkAudit audit_network(const ReluNetwork& net, std::size_t n_points = 1000, std::uint64_t seed = 0,
                           double tolerance = 1e-9);

/// Versioned JSON document; doubles are written as shortest round-trip decimals.
std::string serialize(const ReluNetwork& net);
/// Throws ParseError (with a JSON path) or ValidationError.
ReluNetwork deserialize(const std::string& text);

}  // namespace reluriesz
