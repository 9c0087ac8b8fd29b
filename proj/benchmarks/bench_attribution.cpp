#include <benchmark/benchmark.h>

#include "dine/attribution.hpp"
#include "dine/graph.hpp"
#include "dine/random.hpp"

namespace {

dine::EmbeddingMatrix random_embedding(int dim, int nodes,
                                       std::uint64_t seed) {
  dine::Rng rng(seed);
  dine::EmbeddingMatrix x;
  x.values.resize(dim, nodes);
  for (int v = 0; v < nodes; ++v)
    for (int d = 0; d < dim; ++d) x.values(d, v) = rng.normal();
  return x;
}

void BM_marginal_table(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  auto [g, c] = dine::generate_sbm({8, 40, 0.4, 0.02, 1});
  const auto x = random_embedding(dim, g.num_nodes, 2);
  for (auto _ : state) {
    auto table = dine::utility_table(g, x, dine::ScoringKind::marginal);
    benchmark::DoNotOptimize(table.values.data());
  }
  state.SetItemsProcessed(state.iterations() * g.num_edges());
}
BENCHMARK(BM_marginal_table)->Arg(8)->Arg(32)->Arg(128);

void BM_shapley_pair(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  dine::Rng rng(3);
  std::vector<double> u(dim), v(dim);
  for (int d = 0; d < dim; ++d) {
    u[d] = rng.normal();
    v[d] = rng.normal();
  }
  for (auto _ : state) {
    auto phi = dine::shapley_exact(u, v);
    benchmark::DoNotOptimize(phi.data());
  }
}
BENCHMARK(BM_shapley_pair)->Arg(8)->Arg(12)->Arg(16)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
