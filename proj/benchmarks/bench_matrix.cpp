#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "sharpweights/detail/mvee.hpp"
#include "sharpweights/matrix_weight.hpp"
#include "sharpweights/spb.hpp"

using namespace sharpweights;

static void BM_MatrixAp(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto w = random_matrix_weight(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), rng);
  const auto cands = mesh_candidates(w);
  for (auto _ : state) benchmark::DoNotOptimize(matrix_ap(w, 3.0, cands));
}
BENCHMARK(BM_MatrixAp)->Args({2, 6})->Args({3, 6})->Args({2, 8})->Unit(benchmark::kMillisecond);

static void BM_CgMaximalPieces(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto w = random_matrix_weight(2, static_cast<int>(state.range(0)), rng);
  const auto f = random_vector_field(w, rng);
  for (auto _ : state) benchmark::DoNotOptimize(cg_maximal_pieces(w, 3.0, f));
}
BENCHMARK(BM_CgMaximalPieces)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_ReducingOperator(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto w = random_matrix_weight(static_cast<int>(state.range(0)), 6, rng);
  for (auto _ : state) benchmark::DoNotOptimize(reducing_operator(Interval(0.0, 1.0), 3.0, w).a);
}
BENCHMARK(BM_ReducingOperator)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_Mvee(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const int n = static_cast<int>(state.range(0));
  std::vector<Eigen::VectorXd> pts;
  for (int k = 0; k < 256; ++k) {
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u(i) = g(rng) * (1.0 + i);
    pts.push_back(u);
  }
  for (auto _ : state) benchmark::DoNotOptimize(detail::mvee_centered(pts).gap);
}
BENCHMARK(BM_Mvee)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_SpbConstruct(benchmark::State& state) {
  std::mt19937_64 rng(6);
  const auto w = random_matrix_weight(2, static_cast<int>(state.range(0)), rng);
  const auto f = random_vector_field(w, rng);
  SpbConfig cfg;
  cfg.samples = 200;
  for (auto _ : state) benchmark::DoNotOptimize(spb_construct(DyadicCube{0, 0, {0}}, w, 3.0, f, cfg).family.size());
}
BENCHMARK(BM_SpbConstruct)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
