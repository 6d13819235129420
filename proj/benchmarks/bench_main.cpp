#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "reluriesz/lattice.hpp"
#include "reluriesz/network.hpp"
#include "reluriesz/recovery.hpp"
#include "reluriesz/rng.hpp"
#include "reluriesz/spectrum.hpp"

using namespace reluriesz;

namespace {

RieszCoeffs random_expansion(int d, double R, std::uint64_t seed) {
  Rng rng(seed);
  RieszCoeffs c(d, rng.normal());
  for (const auto& k : enumerate_half_ball(BallSpec::from_radius(R, d))) c.add(k, rng.normal(), rng.normal());
  return c;
}

void BM_CountBall(benchmark::State& state) {
  const auto spec = BallSpec::from_radius(static_cast<double>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(count_ball(spec));
}
BENCHMARK(BM_CountBall)->Arg(4)->Arg(16)->Arg(64);

void BM_EnumerateHalfBall(benchmark::State& state) {
  const auto spec = BallSpec::from_radius(static_cast<double>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_half_ball(spec));
}
BENCHMARK(BM_EnumerateHalfBall)->Arg(8)->Arg(32);

void BM_BuildStacked(benchmark::State& state) {
  const auto c = random_expansion(2, static_cast<double>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_stacked(c));
}
BENCHMARK(BM_BuildStacked)->Arg(4)->Arg(8);

void BM_EvalBatch(benchmark::State& state) {
  const auto net = build_network(random_expansion(2, 8.0, 2), state.range(0) ? Architecture::Inline : Architecture::Stacked);
  const Eigen::MatrixXd X = (Eigen::MatrixXd::Random(2, 1024).array() + 1.0) / 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(net.eval_batch(X));
  state.SetItemsProcessed(state.iterations() * X.cols());
}
BENCHMARK(BM_EvalBatch)->Arg(0)->Arg(1);

void BM_GramMatrix(benchmark::State& state) {
  std::vector<BasisId> ids;
  for (const auto& k : enumerate_half_ball(BallSpec::from_radius(static_cast<double>(state.range(0)), 2))) {
    ids.push_back(BasisId::cos(k));
    ids.push_back(BasisId::sin(k));
  }
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(ids));
}
BENCHMARK(BM_GramMatrix)->Arg(4)->Arg(8);

void BM_FourierToRiesz(benchmark::State& state) {
  FourierCoeffs f(2);
  Rng rng(3);
  for (const auto& k : enumerate_half_ball(BallSpec::from_radius(8.0, 2))) f.add(k, rng.normal(), rng.normal());
  for (auto _ : state) benchmark::DoNotOptimize(fourier_to_riesz(f, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_FourierToRiesz)->Arg(25)->Arg(101);

void BM_BasisPursuit(benchmark::State& state) {
  RieszCoeffs truth(2);
  truth.add(MultiIndex{1, 2}, 0.7, 0.0);
  truth.add(MultiIndex{3, -1}, 0.0, -1.1);
  truth.add(MultiIndex{0, 4}, 0.4, 0.2);
  const auto samples = draw_samples(truth, 60, 4);
  for (auto _ : state) benchmark::DoNotOptimize(basis_pursuit_recover(samples, 6.0, 1e-8));
}
BENCHMARK(BM_BasisPursuit);

}  // namespace

BENCHMARK_MAIN();
