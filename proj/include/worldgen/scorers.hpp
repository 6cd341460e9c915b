#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "worldgen/corpus.hpp"
#include "worldgen/ranking.hpp"

namespace worldgen {

/// Train-split examples for the given tasks, in task order. Tasks without
/// splits are skipped.
std::vector<PlacementExample> train_examples(const Corpus& corpus, FeatureMode mode,
                                             const std::vector<Task>& tasks);

/// Builds a scorer from a name: random, proportional, ir, fasttext, or
/// embedding:<model path>. The result is prepared on the corpus texts.
/// Throws std::invalid_argument for an unknown name.
std::shared_ptr<Scorer> make_scorer(std::string_view spec, const Corpus& corpus, FeatureMode mode,
                                    std::uint64_t seed);

}  // namespace worldgen
