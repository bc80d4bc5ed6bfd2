#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "lgo/diagonal.hpp"
#include "lgo/gkls.hpp"
#include "lgo/minorant.hpp"
#include "lgo/nondominance.hpp"
#include "lgo/objective.hpp"

namespace {

using namespace lgo;

std::vector<Trial> random_trials(std::size_t count, std::size_t dimension,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Trial> trials(count);
  for (std::size_t i = 0; i < count; ++i) {
    trials[i].point.resize(dimension);
    for (double& c : trials[i].point) c = unit(rng);
    trials[i].value = unit(rng) * 4.0 - 2.0;
  }
  return trials;
}

void BM_MinorantValue(benchmark::State& state) {
  const auto trials = random_trials(static_cast<std::size_t>(state.range(0)),
                                    2, 7);
  std::vector<double> x{0.37, 0.61};
  for (auto unused : state)
    benchmark::DoNotOptimize(minorant_value(trials, 3.0, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MinorantValue)->Arg(16)->Arg(128)->Arg(1024);

void BM_NondominatedSelect(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> lev(0, 12);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::vector<MeasurePoint> points(static_cast<std::size_t>(state.range(0)));
  double f_best = 10.0;
  for (auto& p : points) {
    p.d = 0.5 * std::pow(3.0, -lev(rng));
    p.f = val(rng);
    f_best = std::min(f_best, p.f);
  }
  for (auto unused : state)
    benchmark::DoNotOptimize(nondominated_select(points, f_best, 1e-4));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NondominatedSelect)->Arg(64)->Arg(512)->Arg(4096);

void BM_VertexStoreFetch(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::vector<ExactVertex> vertices;
  for (int i = 0; i < 4096; ++i) {
    std::vector<GridCoord> coords;
    for (int j = 0; j < 2; ++j) {
      const std::uint32_t depth = static_cast<std::uint32_t>(rng() % 12);
      std::uint64_t cap = 1;
      for (std::uint32_t d = 0; d < depth; ++d) cap *= 3;
      coords.push_back(canonical_coord(rng() % (cap + 1), depth));
    }
    vertices.emplace_back(std::move(coords));
  }
  VertexStore store;
  auto eval = [](const ExactVertex& v) { return v.unit(0) + v.unit(1); };
  std::size_t i = 0;
  for (auto unused : state) {
    benchmark::DoNotOptimize(store.fetch(vertices[i % vertices.size()], eval));
    ++i;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_VertexStoreFetch);

void BM_GklsValue(benchmark::State& state) {
  GklsClassSpec spec = GklsClassSpec::preset(2, GklsPreset::Simple, 5);
  GklsFunction fn = generate_function(spec, 1);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::vector<std::vector<double>> points(256);
  for (auto& p : points) p = {coord(rng), coord(rng)};
  std::size_t i = 0;
  for (auto unused : state) {
    benchmark::DoNotOptimize(fn.value(points[i % points.size()]));
    ++i;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GklsValue);

}  // namespace

BENCHMARK_MAIN();
