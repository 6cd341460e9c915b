// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "worldgen/assembly.hpp"
#include "worldgen/corpus.hpp"
#include "worldgen/evaluation.hpp"
#include "worldgen/planted.hpp"
#include "worldgen/ranking.hpp"

using namespace worldgen;

namespace {

struct Fixture {
  Corpus corpus = make_planted_corpus({});
  std::vector<PlacementExample> examples;
  std::vector<Candidate> pool;
  std::shared_ptr<IRScorer> ir;

  Fixture() {
    auto ex = derive_examples(corpus, Task::location, FeatureMode::name_and_description);
    for (Split s : kAllSplits) examples.insert(examples.end(), ex[s].begin(), ex[s].end());
    pool = candidate_pool(ex, false);
    ir = std::make_shared<IRScorer>(Vocabulary::fit(corpus_documents(corpus)));
    ir->prepare(scoring_texts(corpus, FeatureMode::name_and_description));
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_HitsAt1(benchmark::State& state) {
  const auto& f = fixture();
  EvalConfig cfg;
  for (auto _ : state) {
    auto r = state.range(0) ? hits_at_1(*f.ir, f.examples, f.pool, cfg)
                            : hits_at_1_serial(*f.ir, f.examples, f.pool, cfg);
    benchmark::DoNotOptimize(r.hits_at_1);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.examples.size()));
}
BENCHMARK(BM_HitsAt1)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CreateWorlds(benchmark::State& state) {
  const auto& f = fixture();
  const auto scorers = ScorerSet::uniform(f.ir);
  GenerationConfig cfg;
  const std::size_t count = 32;
  for (auto _ : state) {
    auto w = state.range(0) ? create_worlds(f.corpus, scorers, cfg, count)
                            : create_worlds_serial(f.corpus, scorers, cfg, count);
    benchmark::DoNotOptimize(w.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count));
}
BENCHMARK(BM_CreateWorlds)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
