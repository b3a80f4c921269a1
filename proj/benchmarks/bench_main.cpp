#include <benchmark/benchmark.h>

#include "qgk/data.hpp"
#include "qgk/kernel.hpp"
#include "qgk/projection.hpp"
#include "qgk/random.hpp"
#include "qgk/svm.hpp"

namespace {

qgk::VggSet vgg_for(int eta) {
  return qgk::build_vgg_set(qgk::build_generator_set(eta), qgk::GroupingConfig::exponential(eta));
}

std::vector<double> random_phi(std::size_t g, std::uint64_t seed) {
  qgk::CounterRng rng(seed);
  std::vector<double> phi(g);
  for (auto& v : phi) v = rng.uniform(-3.14, 3.14);
  return phi;
}

void BM_GeneratorSet(benchmark::State& state) {
  const int eta = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qgk::build_generator_set(eta));
}
BENCHMARK(BM_GeneratorSet)->DenseRange(2, 6);

void BM_VggSet(benchmark::State& state) {
  const int eta = static_cast<int>(state.range(0));
  const auto gs = qgk::build_generator_set(eta);
  for (auto _ : state) benchmark::DoNotOptimize(qgk::build_vgg_set(gs, qgk::GroupingConfig::exponential(eta)));
}
BENCHMARK(BM_VggSet)->DenseRange(2, 5);

void BM_EmbedProduct(benchmark::State& state) {
  const auto vgg = vgg_for(static_cast<int>(state.range(0)));
  const auto phi = random_phi(vgg.groups(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(qgk::embed(vgg, phi, {qgk::EmbeddingMode::Product}));
}
BENCHMARK(BM_EmbedProduct)->DenseRange(2, 6);

void BM_EmbedSumExp(benchmark::State& state) {
  const auto vgg = vgg_for(static_cast<int>(state.range(0)));
  const auto phi = random_phi(vgg.groups(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(qgk::embed(vgg, phi, {qgk::EmbeddingMode::SumExp}));
}
BENCHMARK(BM_EmbedSumExp)->DenseRange(2, 6);

void BM_EmbedVjp(benchmark::State& state) {
  const auto vgg = vgg_for(static_cast<int>(state.range(0)));
  const auto phi = random_phi(vgg.groups(), 2);
  const auto psi = qgk::embed(vgg, phi, {}).psi;
  for (auto _ : state) benchmark::DoNotOptimize(qgk::embed_vjp(vgg, phi, psi, psi));
}
BENCHMARK(BM_EmbedVjp)->DenseRange(2, 5);

void BM_Gram(benchmark::State& state) {
  const auto vgg = vgg_for(3);
  std::vector<qgk::StateVector> states;
  for (int i = 0; i < state.range(0); ++i)
    states.push_back(qgk::embed(vgg, random_phi(vgg.groups(), 10 + static_cast<std::uint64_t>(i)), {}).psi);
  for (auto _ : state) benchmark::DoNotOptimize(qgk::gram(states));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gram)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oNSquared);

void BM_KtaGradient(benchmark::State& state) {
  const auto vgg = vgg_for(2);
  const auto ds = qgk::make_moons(static_cast<std::size_t>(state.range(0)), 0.2, 0);
  const auto p = qgk::init_params(2, static_cast<Eigen::Index>(vgg.groups()), 0);
  for (auto _ : state) benchmark::DoNotOptimize(qgk::kta_gradient(p, ds.x, ds.y, vgg, {}));
}
BENCHMARK(BM_KtaGradient)->Arg(50)->Arg(200);

void BM_Svm(benchmark::State& state) {
  const auto ds = qgk::make_moons(static_cast<std::size_t>(state.range(0)), 0.2, 0);
  const auto k = qgk::classical_kernel(ds.x, qgk::ClassicalKernel::rbf(1.0)).values;
  for (auto _ : state) benchmark::DoNotOptimize(qgk::fit(k, ds.y));
}
BENCHMARK(BM_Svm)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
