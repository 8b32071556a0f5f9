#include <benchmark/benchmark.h>

#include <random>

#include "radiomap/builder.hpp"
#include "radiomap/simulator.hpp"

namespace {

using namespace radiomap;

const GridSpec kGrid{{37.555, 127.042}, 10.0, 70, 100};

RadioMap sparse_map(std::size_t measured) {
  RadioMap m(kGrid);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> v(-100.0, -40.0);
  for (std::size_t i = 0; i < measured; ++i) m.at(rng() % kGrid.rows, rng() % kGrid.cols) = CellState::measured(v(rng));
  return m;
}

void BM_IdwInterpolate(benchmark::State& state) {
  const auto m = sparse_map(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(idw_interpolate(m));
}
BENCHMARK(BM_IdwInterpolate)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_DiscUpdate(benchmark::State& state) {
  RadioMap m(kGrid);
  const SigmaEstimate sigma{static_cast<double>(state.range(0)), 30};
  const SmoothingConfig cfg{};
  for (auto _ : state) benchmark::DoNotOptimize(disc_update(m, {505.0, 355.0}, sigma, -60.0, cfg));
}
BENCHMARK(BM_DiscUpdate)->Arg(0)->Arg(10)->Arg(40);

void BM_BuildMap(benchmark::State& state) {
  PathLossField field;
  field.tx = grid_center(kGrid, {35, 50});
  auto path = sample_polyline(lawnmower(kGrid, 0, 69, 0, 99, 3), 1.4);
  path.resize(static_cast<std::size_t>(state.range(0)));
  const auto trace = generate_trace(field, path, {}, kGrid, "w", 1).trace;
  for (auto _ : state) benchmark::DoNotOptimize(build_map({trace}, kGrid, BuildParams{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildMap)->Arg(2000)->Arg(6000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
