#include <benchmark/benchmark.h>

#include <cmath>

#include "ugmt/bv.hpp"
#include "ugmt/configuration.hpp"
#include "ugmt/heat_kernel.hpp"
#include "ugmt/heat_semigroup.hpp"
#include "ugmt/poisson_mc.hpp"

using namespace ugmt;

namespace {

const BoxDomain I = BoxDomain::unit(1);

void BM_QuotientDistance(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  RandomStream rng(1, 0);
  const auto a = sample_uniform(BoxDomain::unit(2), k, rng), b = sample_uniform(BoxDomain::unit(2), k, rng);
  for (auto _ : state) benchmark::DoNotOptimize(quotient_distance(a, b));
}
BENCHMARK(BM_QuotientDistance)->Arg(2)->Arg(6)->Arg(12);

void BM_SamplePoisson(benchmark::State& state) {
  const BoxDomain W = BoxDomain::centered(2, static_cast<double>(state.range(0)));
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_poisson(W, 7, i++));
}
BENCHMARK(BM_SamplePoisson)->Arg(1)->Arg(3);

void BM_NeumannKernel(benchmark::State& state) {
  const HeatKernel1D k(1.0);
  const double t = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(k.neumann(0.3, 0.7, t));
}
BENCHMARK(BM_NeumannKernel)->Arg(0)->Arg(2)->Arg(4);

void BM_SemigroupApply1D(benchmark::State& state) {
  const HeatKernel1D k(1.0);
  const auto order = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(semigroup_apply_1d([](double x) { return std::cos(M_PI * x); }, 0.01, k, order));
}
BENCHMARK(BM_SemigroupApply1D)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_LaplaceFunctionalMC(benchmark::State& state) {
  const auto f = SmoothFunction::bump({0.4}, 0.3, 0.6);
  MCPlan p;
  p.window = I;
  p.n_samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate([&f](const Configuration& g) { return std::exp(eval_star(f, g)); }, p));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LaplaceFunctionalMC)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_PerimeterMeasure(benchmark::State& state) {
  const auto E =
      SetSpec::level_set(CylinderFunction::star(SmoothFunction::cosine_mode(I, {1})), 0.3).with_count_filter(I, 1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(perimeter_measure(E, I).total_mass());
}
BENCHMARK(BM_PerimeterMeasure)->Unit(benchmark::kMillisecond);

void BM_LiftedIntertwining(benchmark::State& state) {
  const LiftedHeatOperator op(I, 128);
  const auto f = SmoothFunction::bump({0.5}, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(check_intertwining(f, 0.05, op, 1).max_residual);
}
BENCHMARK(BM_LiftedIntertwining)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
