// Hot-path benchmarks: projection, Gini, Louvain and the full pipeline on
// generated corpora.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "polluterwatch/pipeline.hpp"
#include "polluterwatch/synth.hpp"

using namespace pw;

namespace {

SynthConfig corpus_config(int legit, int bots, int days) {
  SynthConfig config;
  config.seed = 42;
  config.n_legit_users = legit;
  config.n_bots = bots;
  config.days = days;
  config.legit_url_pool = std::max(50, legit / 5);
  return config;
}

const SynthOutput& shared_corpus() {
  static SynthOutput output = generate(corpus_config(2000, 100, 60));
  return output;
}

}  // namespace

static void BM_Project(benchmark::State& state) {
  TimeZone tz = TimeZone::load("UTC");
  auto bipartite =
      build_bipartite(shared_corpus().records, BipartiteMode::all_days, tz);
  for (auto _ : state) {
    auto graph = project(bipartite);
    benchmark::DoNotOptimize(graph.edges.size());
  }
}
BENCHMARK(BM_Project);

static void BM_Louvain(benchmark::State& state) {
  TimeZone tz = TimeZone::load("UTC");
  auto graph = project(
      build_bipartite(shared_corpus().records, BipartiteMode::all_days, tz));
  for (auto _ : state) {
    auto partition = louvain(graph, 1);
    benchmark::DoNotOptimize(partition.modularity);
  }
}
BENCHMARK(BM_Louvain);

static void BM_Gini(benchmark::State& state) {
  std::mt19937_64 rng(9);
  std::vector<double> scores(std::size_t(state.range(0)));
  for (auto& s : scores) s = double(rng() % 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gini(scores));
  }
}
BENCHMARK(BM_Gini)->Arg(100)->Arg(10000)->Arg(1000000);

static void BM_DiversityTables(benchmark::State& state) {
  const auto& corpus = shared_corpus();
  auto top = top_k_urls(corpus.records, 20);
  for (auto _ : state) {
    auto tables = diversity_tables(corpus.records, top);
    benchmark::DoNotOptimize(tables.size());
  }
}
BENCHMARK(BM_DiversityTables);

static void BM_FullPipeline(benchmark::State& state) {
  auto output = generate(corpus_config(int(state.range(0)),
                                       int(state.range(0)) / 20, 30));
  for (auto _ : state) {
    auto result = run_detection(output.records, PipelineConfig{});
    benchmark::DoNotOptimize(result.report.flagged.size());
  }
  state.SetItemsProcessed(state.iterations() *
                          std::int64_t(output.records.size()));
}
BENCHMARK(BM_FullPipeline)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
