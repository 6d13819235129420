#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace reluriesz {

/// Counter-based SplitMix64 stream. The output sequence depends only on the
/// seed, so runs are reproducible across platforms and standard libraries.
class Rng {
 public:
  static constexpr std::string_view kGeneratorId = "splitmix64/v1";

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  /// Uniform on [0,1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi], rejection sampled.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Standard normal via Box-Muller; caches the second variate.
  double normal();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes);
/// Seed of an independent substream, e.g. derive_seed(seed, "samples", 3).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

}  // namespace reluriesz
