#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "tvs/extraction.hpp"
#include "tvs/gf_linalg.hpp"
#include "tvs/gridset.hpp"
#include "tvs/lss.hpp"

namespace {

std::vector<tvs::Subspace> random_pool(int p, int n, std::size_t count) {
  const tvs::FieldSpec f(p, n);
  std::mt19937_64 rng(11);
  std::vector<tvs::Subspace> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(tvs::random_subspace(f, static_cast<int>(rng() % static_cast<unsigned>(n + 1)), rng()));
  return out;
}

void BM_SumIntersect(benchmark::State& state) {
  const auto pool = random_pool(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 256);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = pool[i % pool.size()];
    const auto& b = pool[(i * 7 + 3) % pool.size()];
    benchmark::DoNotOptimize(tvs::sum(a, b));
    benchmark::DoNotOptimize(tvs::intersect(a, b));
    ++i;
  }
}
BENCHMARK(BM_SumIntersect)->Args({2, 8})->Args({2, 16})->Args({3, 8})->Args({5, 8});

void BM_OrthComplement(benchmark::State& state) {
  const auto pool = random_pool(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 256);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(tvs::orth_complement(pool[i++ % pool.size()]));
}
BENCHMARK(BM_OrthComplement)->Args({2, 16})->Args({7, 8});

void BM_AnchorScan(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = tvs::gen_from_bilinear(tvs::BilinearMapSpec{{2, n, n}, 1}, 5);
  const auto s = tvs::from_transverse(g.set);
  for (auto _ : state) benchmark::DoNotOptimize(tvs::choose_anchor(s, 1, 64));
}
BENCHMARK(BM_AnchorScan)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Extract(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = tvs::gen_from_bilinear(tvs::BilinearMapSpec{{2, n, n}, static_cast<int>(state.range(1))}, 3);
  tvs::ExtractConfig cfg;
  cfg.eps = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(tvs::extract_variety(g.set, cfg));
}
BENCHMARK(BM_Extract)->Args({4, 1})->Args({5, 1})->Args({6, 2})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
