#include <benchmark/benchmark.h>

#include "parisi/chain.hpp"
#include "parisi/desk_oracle.hpp"
#include "parisi/functional.hpp"
#include "parisi/quadrature.hpp"
#include "parisi/tailblock.hpp"

using namespace parisi;

static void BM_BuildRule(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_rule(order));
}
BENCHMARK(BM_BuildRule)->Arg(40)->Arg(120)->Arg(512);

static void BM_PsiZero(benchmark::State& state) {
  const StepOrderParam g{{0.0, 0.3, 0.6, 0.85}, {0.4, 0.9, 1.7, 3.5}};
  const MixtureSpec spec = MixtureSpec::sk(0.2);
  ChainOptions o;
  o.order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(psi_zero(g, spec, o).psi);
}
BENCHMARK(BM_PsiZero)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_TailMoments(benchmark::State& state) {
  const TailBlockParams p{0.5, 1.0, 1.0, 8.0};
  for (auto _ : state) benchmark::DoNotOptimize(tail_moments(p, 0.9, 0.3));
}
BENCHMARK(BM_TailMoments);

static void BM_PerturbedEval(benchmark::State& state) {
  const StepOrderParam base{{0.0, 0.5}, {0.6, 1.4}};
  const PerturbedParam p = perturb(base, 0.9, 8.0);
  const MixtureSpec spec = MixtureSpec::sk();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_perturbed(p, spec));
}
BENCHMARK(BM_PerturbedEval)->Unit(benchmark::kMillisecond);

static void BM_GrayCodeMax(benchmark::State& state) {
  const CouplingSample s = sample_couplings(MixtureSpec::sk(), static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_max(s));
}
BENCHMARK(BM_GrayCodeMax)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
