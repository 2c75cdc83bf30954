#include <benchmark/benchmark.h>

#include "netalign/kdtree.h"
#include "netalign/trainer.h"
#include "netalign/walk_embedding.h"
#include "test_util.h"

namespace netalign {
namespace {

void BM_KdTreeBuild(benchmark::State& state) {
  const RowMatrix p = testing::GaussianMatrix(static_cast<int>(state.range(0)), 64, 1);
  for (auto _ : state) benchmark::DoNotOptimize(KdTree(p).num_nodes());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KdTreeBuild)->Arg(1000)->Arg(10000);

void BM_KdTreeQuery(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  const RowMatrix p = testing::GaussianMatrix(n, d, 1);
  const RowMatrix q = testing::GaussianMatrix(n, d, 2);
  const KdTree tree(p);
  for (auto _ : state) benchmark::DoNotOptimize(tree.NearestAll(q).size());
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_KdTreeQuery)->Args({4000, 16})->Args({16000, 16})->Args({4000, 64});

void BM_TrainEpoch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const EmbeddingMatrix x1 = testing::MakeEmbedding(testing::GaussianMatrix(n, 64, 1));
  const EmbeddingMatrix x2 = testing::MakeEmbedding(testing::GaussianMatrix(n, 64, 2));
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.snapshot_every = 1000;
  cfg.keep_snapshots = false;
  for (auto _ : state) benchmark::DoNotOptimize(Train(x1, x2, cfg).params.g12.bias(0));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_TrainEpoch)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SkipGramEpoch(benchmark::State& state) {
  const Graph g = testing::WattsStrogatz(static_cast<int>(state.range(0)), 10, 0.1, 3);
  const WalkCorpus corpus = GenerateWalks(g, WalkConfig{});
  SkipGramConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(TrainSkipGram(corpus.walks, g.num_nodes(), cfg).epoch_loss);
  state.SetItemsProcessed(state.iterations() * g.num_nodes());
}
BENCHMARK(BM_SkipGramEpoch)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Walks(benchmark::State& state) {
  const Graph g = testing::WattsStrogatz(1000, 10, 0.1, 3);
  WalkConfig cfg;
  cfg.return_param_p = state.range(0) ? 0.5 : 1.0;
  cfg.inout_param_q = state.range(0) ? 2.0 : 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(GenerateWalks(g, cfg).walks.size());
}
BENCHMARK(BM_Walks)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace netalign

BENCHMARK_MAIN();
