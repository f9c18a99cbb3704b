#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "infodiv/dimred.hpp"
#include "infodiv/divergence.hpp"
#include "infodiv/embed.hpp"
#include "infodiv/kernel.hpp"
#include "infodiv/sample_embed.hpp"
#include "infodiv/stream.hpp"

using namespace infodiv;

namespace {

Distribution random_point(std::mt19937_64& gen, std::size_t d) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(d);
  for (auto& x : v) x = e(gen);
  return validate(v, true);
}

void BM_Divergence(benchmark::State& state) {
  std::mt19937_64 gen(1);
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto p = random_point(gen, d), q = random_point(gen, d);
  for (auto _ : state) benchmark::DoNotOptimize(divergence(DivergenceKind::JS, p, q));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Divergence)->Arg(8)->Arg(1024);

void BM_Quantile(benchmark::State& state) {
  const auto kind = state.range(0) == 0 ? DivergenceKind::JS : DivergenceKind::ChiSquared;
  const auto& spec = kernel_spec(kind);
  double u = 0.0;
  for (auto _ : state) {
    u += 0.6180339887498949;
    if (u >= 1.0) u -= 1.0;
    benchmark::DoNotOptimize(spec.quantile(u > 0.0 ? u : 0.5));
  }
}
BENCHMARK(BM_Quantile)->Arg(0)->Arg(1);

void BM_BuildGrid(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_grid(DivergenceKind::JS, 8, 0.05));
}
BENCHMARK(BM_BuildGrid)->Unit(benchmark::kMillisecond);

void BM_EmbedCoordinate(benchmark::State& state) {
  const auto grid = build_grid(DivergenceKind::JS, 8, 0.05);
  std::vector<double> block(grid.block_len());
  for (auto _ : state) {
    embed_coordinate_into(grid, 0.137, block);
    benchmark::DoNotOptimize(block.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.block_len()));
}
BENCHMARK(BM_EmbedCoordinate)->Unit(benchmark::kMicrosecond);

void BM_RandEmbed(benchmark::State& state) {
  std::mt19937_64 gen(2);
  const auto sample = draw_frequencies(DivergenceKind::JS, 4096, 3);
  const auto p = random_point(gen, 64);
  for (auto _ : state) benchmark::DoNotOptimize(rand_embed_point(sample, p));
}
BENCHMARK(BM_RandEmbed)->Unit(benchmark::kMicrosecond);

void BM_SketchProcess(benchmark::State& state) {
  SketchParams params;
  params.d = 8;
  const auto family = SketchFamily::create(params);
  LinearSketch warm(family);
  for (std::size_t i = 0; i < params.d; ++i) warm.process(i, 0.125);
  std::size_t coord = 0;
  LinearSketch sketch(family);
  for (auto _ : state) {
    if (coord == params.d) {
      state.PauseTiming();
      sketch = LinearSketch(family);
      coord = 0;
      state.ResumeTiming();
    }
    sketch.process(coord++, 0.125);
  }
}
BENCHMARK(BM_SketchProcess)->Unit(benchmark::kMillisecond);

void BM_Estimate(benchmark::State& state) {
  auto a = new_sketch(DivergenceKind::JS, 4, 0.1, 0.1, 0.05, 1);
  auto b = a;
  a.process(0, 1.0);
  b.process(1, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_divergence(a, b));
}
BENCHMARK(BM_Estimate)->Unit(benchmark::kMicrosecond);

void BM_Reduce(benchmark::State& state) {
  std::mt19937_64 gen(4);
  std::vector<Distribution> pts;
  for (int i = 0; i < 16; ++i) pts.push_back(random_point(gen, 64));
  for (auto _ : state) benchmark::DoNotOptimize(reduce(DivergenceKind::Hellinger, pts, 0.5, 1));
}
BENCHMARK(BM_Reduce)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
