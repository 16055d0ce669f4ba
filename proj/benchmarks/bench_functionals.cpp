#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "sharpweights/functionals.hpp"
#include "sharpweights/operators.hpp"
#include "sharpweights/sparse.hpp"
#include "sharpweights/weights.hpp"

using namespace sharpweights;

namespace {

StepFunction random_compact(int pieces) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> bp{0.0};
  std::vector<double> v;
  for (int i = 0; i < pieces; ++i) {
    bp.push_back(bp.back() + u(rng));
    v.push_back(u(rng));
  }
  return StepFunction(bp, v);
}

}  // namespace

static void BM_ApConstantSmallP(benchmark::State& state) {
  const auto ew = build_weight_small_p(static_cast<int>(state.range(0)), 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(ap_constant(ew.weight, Exponent(1.5)).value);
  state.counters["pieces"] = static_cast<double>(ew.weight.piece_count());
}
BENCHMARK(BM_ApConstantSmallP)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_ApConstantPower(benchmark::State& state) {
  const auto pw = build_power_weight(1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ap_constant(pw.weight, Exponent(2.0)).value);
}
BENCHMARK(BM_ApConstantPower)->Arg(4)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_UncenteredMaximal(benchmark::State& state) {
  const auto f = random_compact(1000);
  std::vector<double> xs;
  for (int i = 0; i < state.range(0); ++i) xs.push_back(0.37 * i);
  for (auto _ : state) benchmark::DoNotOptimize(uncentered_maximal_at(f, xs));
}
BENCHMARK(BM_UncenteredMaximal)->Arg(100)->Arg(1000);

static void BM_HilbertStep(benchmark::State& state) {
  const auto f = random_compact(1000);
  double x = 1.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hilbert_step(f, x));
    x += 0.001;
  }
}
BENCHMARK(BM_HilbertStep);

static void BM_SplitSparse(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto lat = DyadicLattice::standard(Interval(0.0, 1.0));
  RandomFamilyConfig cfg;
  cfg.max_cubes = static_cast<std::size_t>(state.range(0));
  const auto fam = random_sparse_family(lat, DyadicCube{0, 0, {0}}, cfg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(split_sparse(fam, 3));
}
BENCHMARK(BM_SplitSparse)->Arg(64)->Arg(512);
