#pragma once

// Seven-label object affordance classifier: one logistic regression head per
// label over binary bag-of-words features of the object's name and
// description.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "worldgen/corpus.hpp"
#include "worldgen/ranking.hpp"

namespace worldgen {

struct AffordanceExample {
  std::string name;
  std::string description;
  AffordanceSet labels;
};

/// One example per object card with at least one known affordance label.
std::vector<AffordanceExample> affordance_examples(const Corpus& corpus);

struct AffordanceTrainingParams {
  double learning_rate = 1.0;
  double l2 = 1e-4;
  double tolerance = 1e-5;
  std::size_t max_epochs = 500;
};

struct AffordanceModel {
  Vocabulary vocab;
  std::array<std::vector<double>, kNumAffordances> weights;
  std::array<double, kNumAffordances> bias{};
  std::array<double, kNumAffordances> threshold{0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
  /// Labels that were constant over the training set; their heads predict
  /// the constant.
  std::array<bool, kNumAffordances> degenerate{};
  std::size_t epochs_run = 0;
  double final_loss = 0.0;

  /// All-zero weights over the given vocabulary.
  static AffordanceModel zeros(Vocabulary vocab);
};

/// Full-batch gradient descent on the mean log loss of each head until the
/// loss changes by less than the tolerance or max_epochs is reached.
/// Throws std::invalid_argument on an empty training set.
AffordanceModel train_affordance_model(std::span<const AffordanceExample> examples,
                                       const AffordanceTrainingParams& params = {});

struct AffordancePrediction {
  AffordanceSet labels;
  std::array<double, kNumAffordances> probabilities{};
};

AffordancePrediction predict_affordances(const AffordanceModel& model, const std::string& name,
                                         const std::string& description);

struct MultiLabelScore {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double precision() const;
  double recall() const;
  double f1() const;
};

MultiLabelScore micro_score(std::span<const AffordanceSet> predicted,
                            std::span<const AffordanceSet> gold);

/// Per label, the value held by the majority of examples (ties negative).
AffordanceSet majority_labels(std::span<const AffordanceExample> examples);

}  // namespace worldgen
