#include "worldgen/scorers.hpp"

#include <stdexcept>
#include <string>

#include "worldgen/assembly.hpp"
#include "worldgen/embedding.hpp"

namespace worldgen {

std::vector<PlacementExample> train_examples(const Corpus& corpus, FeatureMode mode,
                                             const std::vector<Task>& tasks) {
  std::vector<PlacementExample> out;
  for (Task t : tasks) {
    if (!corpus.splits().count(t)) continue;
    auto ex = derive_examples(corpus, t, mode);
    auto& train = ex[Split::train];
    out.insert(out.end(), train.begin(), train.end());
  }
  return out;
}

namespace {

std::shared_ptr<Scorer> fasttext_scorer(const Corpus& corpus, FeatureMode mode, std::uint64_t seed) {
  const std::vector<Task> tasks(kAllTasks.begin(), kAllTasks.end());
  auto examples = train_examples(corpus, mode, tasks);
  CandidatePools pools;
  for (Task t : tasks) {
    std::vector<PlacementExample> of_task;
    for (const auto& e : examples) {
      if (e.task == t) of_task.push_back(e);
    }
    if (!of_task.empty()) pools[t] = candidate_pool(of_task);
  }
  EmbeddingScorerParams p;
  p.seed = seed;
  p.subword_init = true;
  p.freeze_embeddings = true;
  p.epochs = 1;
  auto result = train_embedding_scorer(examples, pools, p, mode);
  return std::make_shared<EmbeddingScorer>(result.model, "fasttext");
}

}  // namespace

std::shared_ptr<Scorer> make_scorer(std::string_view spec, const Corpus& corpus, FeatureMode mode,
                                    std::uint64_t seed) {
  std::shared_ptr<Scorer> s;
  if (spec == "random") {
    s = std::make_shared<RandomScorer>(seed);
  } else if (spec == "proportional") {
    const std::vector<Task> tasks(kAllTasks.begin(), kAllTasks.end());
    s = std::make_shared<ProportionalScorer>(train_examples(corpus, mode, tasks));
  } else if (spec == "ir") {
    s = std::make_shared<IRScorer>(Vocabulary::fit(corpus_documents(corpus)));
  } else if (spec == "fasttext") {
    s = fasttext_scorer(corpus, mode, seed);
  } else if (spec.starts_with("embedding:")) {
    s = std::make_shared<EmbeddingScorer>(load_model(std::string(spec.substr(10))));
  } else {
    throw std::invalid_argument("unknown scorer: " + std::string(spec));
  }
  s->prepare(scoring_texts(corpus, mode));
  return s;
}

}  // namespace worldgen
