#include <benchmark/benchmark.h>

#include "dine/random.hpp"
#include "dine/retrofit.hpp"

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

// Cost of one full-batch loss + gradient evaluation.
void BM_loss_and_gradients(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int nodes = static_cast<int>(state.range(1));
  const auto x = random_embedding(dim, nodes, 1);
  const auto params = dine::init_params(dim, dim, 2);
  for (auto _ : state) {
    auto result = dine::loss_and_gradients(params, x.values, true, true);
    benchmark::DoNotOptimize(result.first.total);
  }
}
BENCHMARK(BM_loss_and_gradients)
    ->Args({8, 80})
    ->Args({32, 500})
    ->Args({128, 2000});

void BM_train_short(benchmark::State& state) {
  const auto x = random_embedding(8, 80, 1);
  dine::RetrofitConfig cfg;
  cfg.hidden_dim = 8;
  cfg.iterations = 100;
  cfg.learning_rate = 0.1;
  for (auto _ : state) {
    auto result = dine::train_retrofit(x, cfg);
    benchmark::DoNotOptimize(result.hidden.values.data());
  }
}
BENCHMARK(BM_train_short)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
