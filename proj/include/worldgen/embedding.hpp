#pragma once

// Trainable bag-of-words embedding ranker.
//
// Context and candidate texts are encoded as the mean of their token rows in a
// single shared embedding table; the score is the inner product of the two
// pooled vectors. Training minimizes a margin ranking loss against negatives
// sampled uniformly from each task's gold pool, with plain SGD and a hard cap
// on every row's L2 norm.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "worldgen/corpus.hpp"
#include "worldgen/ranking.hpp"

namespace worldgen {

struct EmbeddingScorerParams {
  std::size_t dim = 128;
  double max_norm = 10.0;
  double learning_rate = 0.01;
  double input_dropout = 0.5;
  double margin = 0.2;
  std::size_t negatives = 10;
  std::size_t epochs = 500;
  std::uint64_t seed = 0;
  /// Uniform init range [-init_scale, init_scale].
  double init_scale = 0.1;
  /// Character 3-5-gram buckets averaged into each token's initial row.
  bool subword_init = false;
  std::size_t buckets = 20000;
  /// Keep the initial rows fixed (subword-only baseline).
  bool freeze_embeddings = false;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

nlohmann::json to_json(const EmbeddingScorerParams& p);
EmbeddingScorerParams params_from_json(const nlohmann::json& j);

struct TrainingMetadata {
  std::size_t epochs_run = 0;
  double final_loss = 0.0;
  std::uint64_t seed = 0;
  std::vector<Task> tasks;
  FeatureMode feature_mode = FeatureMode::name_and_description;
  bool operator==(const TrainingMetadata&) const = default;
};

class EmbeddingModel {
 public:
  EmbeddingModel(Vocabulary vocab, EmbeddingScorerParams params, std::vector<float> rows,
                 std::vector<float> bucket_rows, TrainingMetadata meta);

  const Vocabulary& vocabulary() const { return vocab_; }
  const EmbeddingScorerParams& params() const { return params_; }
  const TrainingMetadata& metadata() const { return meta_; }
  std::size_t dim() const { return params_.dim; }
  std::size_t bucket_count() const { return bucket_rows_.size() / params_.dim; }

  std::span<const float> row(std::size_t token) const {
    return {rows_.data() + token * params_.dim, params_.dim};
  }
  const std::vector<float>& rows() const { return rows_; }
  const std::vector<float>& bucket_rows() const { return bucket_rows_; }

  /// Mean of known token rows (unknown tokens fall back to their subword
  /// buckets when present, otherwise are skipped). Zero vector if nothing
  /// is known.
  std::vector<float> pool(const std::string& text) const;

  double max_row_norm() const;

  bool operator==(const EmbeddingModel& o) const {
    return vocab_ == o.vocab_ && rows_ == o.rows_ && bucket_rows_ == o.bucket_rows_ &&
           meta_ == o.meta_;
  }

 private:
  Vocabulary vocab_;
  EmbeddingScorerParams params_;
  std::vector<float> rows_;
  std::vector<float> bucket_rows_;
  TrainingMetadata meta_;
};

struct TrainingResult {
  std::shared_ptr<const EmbeddingModel> model;
  std::vector<double> loss_trace;  // mean example loss per epoch
};

/// Per-task pools of training gold candidates.
using CandidatePools = std::map<Task, std::vector<Candidate>>;

/// Throws std::invalid_argument on empty examples, invalid params, or a task
/// whose pool has no candidate other than the gold.
TrainingResult train_embedding_scorer(const std::vector<PlacementExample>& examples,
                                      const CandidatePools& pools,
                                      const EmbeddingScorerParams& params,
                                      FeatureMode feature_mode = FeatureMode::name_and_description);

/// Character n-gram bucket ids for a token ("<tok>" padded, n in [3, 5]).
std::vector<std::size_t> subword_buckets(const std::string& token, std::size_t buckets);

class EmbeddingScorer final : public Scorer {
 public:
  explicit EmbeddingScorer(std::shared_ptr<const EmbeddingModel> model, std::string label = "embedding")
      : model_(std::move(model)), label_(std::move(label)) {}
  std::string name() const override { return label_; }
  std::vector<double> score(const ScorerInput& input) const override;
  void prepare(std::span<const std::string> texts) override;
  const EmbeddingModel& model() const { return *model_; }

 private:
  std::shared_ptr<const EmbeddingModel> model_;
  std::string label_;
  std::unordered_map<std::string, std::vector<float>> cache_;
};

double dot(std::span<const float> a, std::span<const float> b);

// ---------------------------------------------------------------------------
// Model files

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ModelVersionError : public ModelFormatError {
 public:
  using ModelFormatError::ModelFormatError;
};
class CorruptModelError : public ModelFormatError {
 public:
  using ModelFormatError::ModelFormatError;
};

inline constexpr char kModelMagic[8] = {'W', 'G', 'B', 'O', 'W', 'E', 'M', 'B'};
inline constexpr std::uint32_t kModelVersion = 1;

void save_model(const EmbeddingModel& model, const std::filesystem::path& path);
std::shared_ptr<const EmbeddingModel> load_model(const std::filesystem::path& path);
std::string serialize_model(const EmbeddingModel& model);
std::shared_ptr<const EmbeddingModel> deserialize_model(const std::string& bytes);

}  // namespace worldgen
