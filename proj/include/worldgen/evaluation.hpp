#pragma once

// Hits@1 ranking evaluation and text-overlap metrics.
//
// hits_at_1 is the OpenMP kernel; hits_at_1_serial is the single-threaded
// reference it is tested against. Both sample each example's distractors from
// a stream keyed by (seed, example index), so they agree exactly.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "worldgen/corpus.hpp"
#include "worldgen/ranking.hpp"

namespace worldgen {

enum class DistractorSource { task_train_pool, task_all_pool };
std::string_view to_string(DistractorSource s);
DistractorSource parse_distractor_source(std::string_view s);

struct EvalConfig {
  /// Gold plus num_candidates - 1 distractors.
  std::size_t num_candidates = 21;
  DistractorSource distractor_source = DistractorSource::task_all_pool;
  std::uint64_t seed = 0;
  /// Recorded in the report; does not change the computation.
  FeatureMode feature_mode = FeatureMode::name_and_description;
};

struct EvalRecord {
  std::string context;
  std::string gold;
  std::string top1;
  std::size_t gold_rank = 0;
  bool operator==(const EvalRecord&) const = default;
};

struct EvalReport {
  Task task = Task::location;
  FeatureMode feature_mode = FeatureMode::name_and_description;
  std::string scorer;
  EvalConfig config;
  double hits_at_1 = 0.0;  // percentage
  std::vector<EvalRecord> records;
};

/// Throws std::invalid_argument when num_candidates < 2, the examples mix
/// tasks, or the pool cannot supply num_candidates - 1 distractors.
EvalReport hits_at_1(const Scorer& scorer, std::span<const PlacementExample> examples,
                     std::span<const Candidate> pool, const EvalConfig& config);
EvalReport hits_at_1_serial(const Scorer& scorer, std::span<const PlacementExample> examples,
                            std::span<const Candidate> pool, const EvalConfig& config);

/// The exact ScorerInput hits_at_1 builds for example i; gold_index receives
/// the gold's position among the candidates.
ScorerInput evaluation_input(const PlacementExample& example, std::size_t index,
                             std::span<const Candidate> pool, const EvalConfig& config,
                             std::size_t* gold_index);

nlohmann::json to_json(const EvalReport& report);
std::string to_csv(const EvalReport& report);

/// Token-multiset F1 (tokens as produced by tokenize()).
double f1_overlap(const std::string& predicted, const std::string& gold);

/// Fraction of generated n-grams (with multiplicity) present in the set of
/// training n-grams; 0 when the generated side has no n-grams.
double ngram_novelty(std::span<const std::string> generated, std::span<const std::string> train,
                     std::size_t n);

/// Quote a CSV field when needed.
std::string csv_field(const std::string& s);

}  // namespace worldgen
