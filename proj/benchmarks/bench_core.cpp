#include <benchmark/benchmark.h>

#include "lpcond/conditional_engine.hpp"
#include "lpcond/displacement_law.hpp"
#include "lpcond/exact_oracles.hpp"
#include "lpcond/fourier_llt.hpp"
#include "lpcond/models.hpp"
#include "lpcond/probing.hpp"
#include "lpcond/rng.hpp"

using namespace lpcond;

static void BM_InsertTrace(benchmark::State& state) {
  const auto m = state.range(0);
  HashSequence seq{m, {}};
  RngStream rng(1, 0);
  for (std::int64_t i = 0; i < m * 9 / 10; ++i) {
    seq.addresses.push_back(1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(m))));
  }
  for (auto _ : state) benchmark::DoNotOptimize(insert_trace(seq).total);
  state.SetItemsProcessed(state.iterations() * seq.n());
}
BENCHMARK(BM_InsertTrace)->Arg(1 << 10)->Arg(1 << 14);

static void BM_ExactDisplacementPmf(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(exact_displacement_pmf(state.range(0), state.range(0) - 2));
}
BENCHMARK(BM_ExactDisplacementPmf)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_DisplacementLaw(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(displacement_law(state.range(0)));
}
BENCHMARK(BM_DisplacementLaw)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_ConditionalLawOccupancy(benchmark::State& state) {
  const ModelSpec model = occupancy_model(1.0);
  const ConditioningSpec cond{state.range(0), state.range(0)};
  for (auto _ : state) benchmark::DoNotOptimize(exact_conditional_law(model, cond));
}
BENCHMARK(BM_ConditionalLawOccupancy)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_ConditionalLawHashing(benchmark::State& state) {
  const ModelSpec model = hashing_model(0.5);
  const ConditioningSpec cond{state.range(0), 2 * state.range(0)};
  for (auto _ : state) benchmark::DoNotOptimize(exact_conditional_law(model, cond));
}
BENCHMARK(BM_ConditionalLawHashing)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_PsiQuadrature(benchmark::State& state) {
  const ModelSpec model = occupancy_model(1.0);
  const ConditioningSpec cond{state.range(0), state.range(0)};
  for (auto _ : state) benchmark::DoNotOptimize(psi_quadrature(model, cond, 0.0, 1e-12));
}
BENCHMARK(BM_PsiQuadrature)->Arg(200)->Arg(1600)->Unit(benchmark::kMillisecond);

static void BM_RejectionSample(benchmark::State& state) {
  const ModelSpec model = hashing_model(0.5);
  const ConditioningSpec cond{state.range(0), 2 * state.range(0)};
  RejectionOptions opt;
  opt.target = 1000;
  opt.seed = 7;
  for (auto _ : state) benchmark::DoNotOptimize(rejection_sample(model, cond, opt).accepted);
}
BENCHMARK(BM_RejectionSample)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
