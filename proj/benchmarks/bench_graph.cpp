#include <benchmark/benchmark.h>

#include "dine/graph.hpp"
#include "dine/sgns.hpp"

namespace {

void BM_louvain(benchmark::State& state) {
  const int blocks = static_cast<int>(state.range(0));
  auto [g, c] = dine::generate_sbm({blocks, 50, 0.2, 0.005, 7});
  for (auto _ : state) {
    auto assignment = dine::louvain(g, 1);
    benchmark::DoNotOptimize(assignment.num_communities);
  }
  state.SetLabel(std::to_string(g.num_nodes) + " nodes / " +
                 std::to_string(g.num_edges()) + " edges");
}
BENCHMARK(BM_louvain)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_walks(benchmark::State& state) {
  auto [g, c] = dine::generate_sbm({8, 50, 0.2, 0.01, 7});
  for (auto _ : state) {
    auto walks = dine::sample_walks(g, {10, 10, 5, 1});
    benchmark::DoNotOptimize(walks.size());
  }
}
BENCHMARK(BM_walks)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
