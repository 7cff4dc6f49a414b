#include <benchmark/benchmark.h>

#include <random>

#include "aerodet/anchors.hpp"
#include "aerodet/eval.hpp"
#include "aerodet/raster.hpp"
#include "aerodet/shearlet_bank.hpp"

namespace {

using namespace aerodet;

void BM_BuildBank(benchmark::State& state) {
  ShearletSpec spec;
  spec.freq_grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_bank(spec));
}
BENCHMARK(BM_BuildBank)->Arg(64)->Arg(128)->Arg(256);

void BM_Convolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Plane plane(n, n);
  for (auto& v : plane.values) v = u(rng);
  const auto kernel = build_bank(ShearletSpec{}).at(2, 3).kernel;
  for (auto _ : state) benchmark::DoNotOptimize(convolve2d(plane, kernel));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Convolve)->Arg(64)->Arg(256)->Arg(512);

void BM_Decompose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto bank = build_bank(ShearletSpec{});
  const auto image = Image::filled(n, n, 3, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(image, bank));
}
BENCHMARK(BM_Decompose)->Arg(256);

std::vector<Anchor> shapes(int n) {
  std::mt19937_64 rng(7);
  std::lognormal_distribution<double> d(3.5, 0.7);
  std::vector<Anchor> out;
  for (int i = 0; i < n; ++i) out.push_back({std::round(d(rng)) + 1, std::round(d(rng)) + 1});
  return out;
}

void BM_KMeans(benchmark::State& state) {
  const auto data = shapes(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kmeans_iou(data, 6, 42, 10));
}
BENCHMARK(BM_KMeans)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  const int images = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<GroundTruth> gts;
  std::vector<Detection> dets;
  for (int i = 0; i < images; ++i) {
    const std::string id = "img" + std::to_string(i);
    for (int k = 0; k < 8; ++k) {
      const Box b{500 * u(rng), 500 * u(rng), 10 + 90 * u(rng), 10 + 90 * u(rng)};
      gts.push_back({id, b, 0});
      dets.push_back({id, Box{b.x + 5 * u(rng), b.y + 5 * u(rng), b.w, b.h}, u(rng), 0});
      dets.push_back({id, Box{500 * u(rng), 500 * u(rng), 30, 30}, u(rng), 0});
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(dets, gts));
}
BENCHMARK(BM_Evaluate)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
