#pragma once

// Candidate scorers shared by all four placement tasks.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "worldgen/corpus.hpp"

namespace worldgen {

class Vocabulary {
 public:
  Vocabulary() = default;

  /// One document per text; tokens indexed in first-seen order.
  static Vocabulary fit(std::span<const std::string> documents);

  std::size_t size() const { return tokens_.size(); }
  std::size_t document_count() const { return documents_; }
  /// -1 when absent.
  std::int64_t index(const std::string& token) const;
  const std::string& token(std::size_t i) const { return tokens_[i]; }
  std::size_t document_frequency(std::size_t i) const { return df_[i]; }
  /// 0 for unknown tokens.
  std::size_t document_frequency(const std::string& token) const;

  /// Rebuilds from stored parts (model loading).
  static Vocabulary from_parts(std::vector<std::string> tokens, std::vector<std::size_t> df,
                               std::size_t documents);
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::size_t>& frequencies() const { return df_; }

  bool operator==(const Vocabulary& o) const {
    return tokens_ == o.tokens_ && df_ == o.df_ && documents_ == o.documents_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::size_t> df_;
  std::size_t documents_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

/// A rankable element: identity (name) plus the text content scorers read.
struct Candidate {
  std::string name;
  std::string text;
  bool operator==(const Candidate&) const = default;
};

struct ScorerInput {
  std::string context_text;
  std::vector<Candidate> candidates;
  Task task = Task::location;
  /// Per-call key for stochastic scorers, so that results do not depend on
  /// call order (parallel evaluation reproduces serial evaluation).
  std::uint64_t nonce = 0;
};

class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::string name() const = 0;
  /// Scores aligned with input.candidates. Throws std::invalid_argument on an
  /// empty candidate list. Must be safe to call concurrently.
  virtual std::vector<double> score(const ScorerInput& input) const = 0;
  /// Optional warm-up with texts that will be scored repeatedly. Not
  /// thread-safe; call before sharing the scorer.
  virtual void prepare(std::span<const std::string> /*texts*/) {}
};

/// Candidate indices by descending score, ties by ascending index.
std::vector<std::size_t> rank_scores(std::span<const double> scores);
std::vector<std::size_t> rank(const Scorer& scorer, const ScorerInput& input);

class RandomScorer final : public Scorer {
 public:
  explicit RandomScorer(std::uint64_t seed) : seed_(seed) {}
  std::string name() const override { return "random"; }
  std::vector<double> score(const ScorerInput& input) const override;

 private:
  std::uint64_t seed_;
};

/// Score = number of times the candidate is a training gold for the task.
class ProportionalScorer final : public Scorer {
 public:
  /// Counts golds per task over the given examples (normally the train split).
  explicit ProportionalScorer(std::span<const PlacementExample> train_examples);
  std::string name() const override { return "proportional"; }
  std::vector<double> score(const ScorerInput& input) const override;
  std::size_t frequency(Task task, const std::string& name) const;

 private:
  std::unordered_map<std::string, std::size_t> counts_;  // "task\x1fname"
};

/// TF-IDF cosine. tf = raw count, idf = ln((1 + N) / (1 + df)) + 1.
class IRScorer final : public Scorer {
 public:
  explicit IRScorer(Vocabulary vocab) : vocab_(std::move(vocab)) {}
  std::string name() const override { return "ir"; }
  std::vector<double> score(const ScorerInput& input) const override;
  void prepare(std::span<const std::string> texts) override;

  double idf(const std::string& token) const;
  double cosine(const std::string& a, const std::string& b) const;
  const Vocabulary& vocabulary() const { return vocab_; }

 private:
  struct SparseVec {
    std::vector<std::pair<std::string, double>> entries;  // sorted by token
    double norm = 0.0;
  };
  SparseVec weigh(const std::string& text) const;
  const SparseVec* cached(const std::string& text) const;
  static double dot(const SparseVec& a, const SparseVec& b);

  Vocabulary vocab_;
  std::unordered_map<std::string, SparseVec> cache_;
};

/// Document collection the IR scorer's idf is fitted on: one document per
/// card (name + description), all kinds, fillers included.
std::vector<std::string> corpus_documents(const Corpus& corpus);

/// Distinct golds (by folded name) in first-seen order.
std::vector<Candidate> candidate_pool(std::span<const PlacementExample> examples);
std::vector<Candidate> candidate_pool(const SplitExamples& examples, bool train_only);

}  // namespace worldgen
