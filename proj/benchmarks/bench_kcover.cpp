#include <benchmark/benchmark.h>

#include <vector>

#include "kcover/critical_points.hpp"
#include "kcover/errors.hpp"
#include "kcover/geometry.hpp"
#include "kcover/grid_index.hpp"
#include "kcover/point_process.hpp"
#include "kcover/rng.hpp"

namespace {

kcover::PointCloud make_cloud(double n, int d) {
  return kcover::sample_poisson(n, d, kcover::SeedSpec{7, 0});
}

void BM_KnnQuery(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto cloud = make_cloud(10000.0, 2);
  const kcover::SpatialIndex index(
      cloud, kcover::SpatialIndex::default_cell_size(cloud.size(), k, 2));
  kcover::Rng rng(99);
  double q[2];
  for (auto _ : state) {
    q[0] = rng.uniform01();
    q[1] = rng.uniform01();
    benchmark::DoNotOptimize(index.knn_distance(q, k));
  }
}
BENCHMARK(BM_KnnQuery)->Arg(1)->Arg(2)->Arg(8);

void BM_CountInBall(benchmark::State& state) {
  const auto cloud = make_cloud(10000.0, 2);
  const kcover::SpatialIndex index(
      cloud, kcover::SpatialIndex::default_cell_size(cloud.size(), 2, 2));
  kcover::Rng rng(99);
  double c[2];
  const std::vector<std::uint32_t> none;
  for (auto _ : state) {
    c[0] = rng.uniform01();
    c[1] = rng.uniform01();
    try {
      benchmark::DoNotOptimize(index.count_in_ball(c, 0.02, none));
    } catch (const kcover::marginal_error&) {
      // a center whose sphere grazes a sample point; skip like the drivers do
    }
  }
}
BENCHMARK(BM_CountInBall);

void BM_Circumsphere(benchmark::State& state) {
  kcover::Rng rng(4);
  std::vector<kcover::TorusPoint> pts(3);
  for (auto _ : state) {
    state.PauseTiming();
    const double cx = rng.uniform01(), cy = rng.uniform01();
    for (auto& p : pts)
      p.x = {kcover::wrap01(cx + 0.02 * (rng.uniform01() - 0.5)),
             kcover::wrap01(cy + 0.02 * (rng.uniform01() - 0.5))};
    state.ResumeTiming();
    try {
      benchmark::DoNotOptimize(kcover::circumsphere(pts));
    } catch (const kcover::degenerate_error&) {
      // near-collinear triple; skip like the enumerator does
    }
  }
}
BENCHMARK(BM_Circumsphere);

void BM_CriticalValueCeiling(benchmark::State& state) {
  const auto cloud = make_cloud(static_cast<double>(state.range(0)), 2);
  const kcover::SpatialIndex index(
      cloud, kcover::SpatialIndex::default_cell_size(cloud.size(), 2, 2));
  for (auto _ : state)
    benchmark::DoNotOptimize(kcover::critical_value_ceiling(index, 2));
}
BENCHMARK(BM_CriticalValueCeiling)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_EnumerateWindow(benchmark::State& state) {
  const auto cloud = make_cloud(static_cast<double>(state.range(0)), 2);
  const kcover::SpatialIndex index(
      cloud, kcover::SpatialIndex::default_cell_size(cloud.size(), 2, 2));
  const auto ceiling = kcover::critical_value_ceiling(index, 2);
  kcover::EnumerationWindow win;
  win.r_min = 0.8 * ceiling.upper;
  win.r_max = std::min(0.25, ceiling.upper);
  win.mu_min = 2;
  win.mu_max = 2;
  for (auto _ : state)
    benchmark::DoNotOptimize(kcover::enumerate_critical_points(index, 2, win));
}
BENCHMARK(BM_EnumerateWindow)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
