#include <benchmark/benchmark.h>

#include <string>

#include "dspanner/generate.hpp"
#include "dspanner/graph.hpp"
#include "dspanner/lp.hpp"
#include "dspanner/paths.hpp"
#include "dspanner/rounding.hpp"
#include "dspanner/verify.hpp"

namespace {

using namespace dspanner;

DiGraph er(long n, double degree, int maxlen = 4) {
  const std::string spec = "er:n=" + std::to_string(n) + ",p=" + std::to_string(degree / static_cast<double>(n)) +
                           ",maxlen=" + std::to_string(maxlen) + ",seed=11";
  return generate_instance(parse_instance_spec(spec));
}

void BM_Dijkstra(benchmark::State& state) {
  const DiGraph g = er(state.range(0), 6.0);
  VertexId source = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(shortest_paths(g, source, Direction::kOutward));
    source = (source + 1) % g.num_vertices();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.num_edges()));
}
BENCHMARK(BM_Dijkstra)->RangeMultiplier(4)->Range(64, 4096);

void BM_EnumerateDemandPaths(benchmark::State& state) {
  const DiGraph g = er(40, 4.0);
  const int k = static_cast<int>(state.range(0));
  std::size_t paths = 0;
  for (auto _ : state) {
    paths = 0;
    for (EdgeId d = 0; d < g.num_edges(); ++d) paths += enumerate_demand_paths(g, k, d).paths.size();
    benchmark::DoNotOptimize(paths);
  }
  state.counters["paths"] = static_cast<double>(paths);
}
BENCHMARK(BM_EnumerateDemandPaths)->DenseRange(2, 4);

void BM_SolvePathLp(benchmark::State& state) {
  const DiGraph g = er(state.range(0), 3.0);
  const LpModel model = build_lp(g, 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(model).objective_value);
  state.counters["path_vars"] = static_cast<double>(model.num_path_vars());
  state.SetLabel("m=" + std::to_string(g.num_edges()));
}
BENCHMARK(BM_SolvePathLp)->Arg(15)->Arg(25)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_BuildSpanner(benchmark::State& state) {
  const DiGraph g = er(state.range(0), 3.0);
  const LpSolution lp = solve_lp(build_lp(g, 3));
  RoundingParams params{.mode = RoundingMode::kGeneral, .k = 3, .alpha = 0.5};
  for (auto _ : state) {
    ++params.seed;
    benchmark::DoNotOptimize(build_spanner(g, lp, params).e_h.size());
  }
}
BENCHMARK(BM_BuildSpanner)->Arg(25)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_IsKSpanner(benchmark::State& state) {
  const DiGraph g = er(state.range(0), 5.0);
  const EdgeSet all(g.num_edges(), true);
  for (auto _ : state) benchmark::DoNotOptimize(is_k_spanner(g, all, 3).ok);
}
BENCHMARK(BM_IsKSpanner)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
