#include "worldgen/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "worldgen/rng.hpp"
#include "worldgen/text.hpp"

namespace worldgen {

Vocabulary Vocabulary::fit(std::span<const std::string> documents) {
  Vocabulary v;
  v.documents_ = documents.size();
  for (const auto& doc : documents) {
    std::unordered_set<std::string> seen;
    for (auto& tok : tokenize(doc)) {
      if (!seen.insert(tok).second) continue;
      auto [it, inserted] = v.index_.emplace(tok, v.tokens_.size());
      if (inserted) {
        v.tokens_.push_back(tok);
        v.df_.push_back(0);
      }
      ++v.df_[it->second];
    }
  }
  return v;
}

Vocabulary Vocabulary::from_parts(std::vector<std::string> tokens, std::vector<std::size_t> df,
                                  std::size_t documents) {
  if (tokens.size() != df.size()) throw std::invalid_argument("vocabulary parts differ in size");
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  v.df_ = std::move(df);
  v.documents_ = documents;
  for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
    if (!v.index_.emplace(v.tokens_[i], i).second) {
      throw std::invalid_argument("duplicate vocabulary token: " + v.tokens_[i]);
    }
  }
  return v;
}

std::int64_t Vocabulary::index(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::size_t Vocabulary::document_frequency(const std::string& token) const {
  auto i = index(token);
  return i < 0 ? 0 : df_[static_cast<std::size_t>(i)];
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> rank_scores(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

std::vector<std::size_t> rank(const Scorer& scorer, const ScorerInput& input) {
  const auto scores = scorer.score(input);
  return rank_scores(scores);
}

namespace {

void require_candidates(const ScorerInput& input) {
  if (input.candidates.empty()) throw std::invalid_argument("empty candidate list");
}

std::string task_key(Task task, const std::string& name) {
  std::string key(to_string(task));
  key.push_back('\x1f');
  key += fold_name(name);
  return key;
}

}  // namespace

std::vector<double> RandomScorer::score(const ScorerInput& input) const {
  require_candidates(input);
  Stream rng(derive_seed(seed_, input.nonce));
  std::vector<double> out(input.candidates.size());
  for (auto& s : out) s = rng.uniform();
  return out;
}

ProportionalScorer::ProportionalScorer(std::span<const PlacementExample> train_examples) {
  for (const auto& ex : train_examples) ++counts_[task_key(ex.task, ex.gold)];
}

std::size_t ProportionalScorer::frequency(Task task, const std::string& name) const {
  auto it = counts_.find(task_key(task, name));
  return it == counts_.end() ? 0 : it->second;
}

std::vector<double> ProportionalScorer::score(const ScorerInput& input) const {
  require_candidates(input);
  std::vector<double> out;
  out.reserve(input.candidates.size());
  for (const auto& c : input.candidates) {
    out.push_back(static_cast<double>(frequency(input.task, c.name)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// IR

double IRScorer::idf(const std::string& token) const {
  const double n = static_cast<double>(vocab_.document_count());
  const double df = static_cast<double>(vocab_.document_frequency(token));
  return std::log((1.0 + n) / (1.0 + df)) + 1.0;
}

IRScorer::SparseVec IRScorer::weigh(const std::string& text) const {
  std::map<std::string, double> tf;
  for (auto& tok : tokenize(text)) tf[tok] += 1.0;
  SparseVec v;
  double sq = 0.0;
  for (auto& [tok, count] : tf) {
    const double w = count * idf(tok);
    sq += w * w;
    v.entries.emplace_back(tok, w);
  }
  v.norm = std::sqrt(sq);
  return v;
}

double IRScorer::dot(const SparseVec& a, const SparseVec& b) {
  double s = 0.0;
  auto i = a.entries.begin();
  auto j = b.entries.begin();
  while (i != a.entries.end() && j != b.entries.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      s += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return s;
}

const IRScorer::SparseVec* IRScorer::cached(const std::string& text) const {
  auto it = cache_.find(text);
  return it == cache_.end() ? nullptr : &it->second;
}

void IRScorer::prepare(std::span<const std::string> texts) {
  for (const auto& t : texts) {
    if (!cache_.count(t)) cache_.emplace(t, weigh(t));
  }
}

double IRScorer::cosine(const std::string& a, const std::string& b) const {
  SparseVec va = weigh(a);
  SparseVec vb = weigh(b);
  if (va.norm == 0.0 || vb.norm == 0.0) return 0.0;
  return dot(va, vb) / (va.norm * vb.norm);
}

std::vector<double> IRScorer::score(const ScorerInput& input) const {
  require_candidates(input);
  SparseVec local_ctx;
  const SparseVec* ctx = cached(input.context_text);
  if (!ctx) {
    local_ctx = weigh(input.context_text);
    ctx = &local_ctx;
  }
  std::vector<double> out;
  out.reserve(input.candidates.size());
  for (const auto& c : input.candidates) {
    SparseVec local;
    const SparseVec* cv = cached(c.text);
    if (!cv) {
      local = weigh(c.text);
      cv = &local;
    }
    if (ctx->norm == 0.0 || cv->norm == 0.0) {
      out.push_back(0.0);
    } else {
      out.push_back(dot(*ctx, *cv) / (ctx->norm * cv->norm));
    }
  }
  return out;
}

std::vector<std::string> corpus_documents(const Corpus& corpus) {
  std::vector<std::string> docs;
  for (const auto& l : corpus.locations()) docs.push_back(l.name + " " + l.description);
  for (const auto& c : corpus.characters()) docs.push_back(c.name + " " + c.description);
  for (const auto& o : corpus.objects()) docs.push_back(o.name + " " + o.description);
  return docs;
}

std::vector<Candidate> candidate_pool(std::span<const PlacementExample> examples) {
  std::vector<Candidate> pool;
  std::unordered_set<std::string> seen;
  for (const auto& ex : examples) {
    if (seen.insert(fold_name(ex.gold)).second) pool.push_back({ex.gold, ex.gold_text});
  }
  return pool;
}

std::vector<Candidate> candidate_pool(const SplitExamples& examples, bool train_only) {
  std::vector<PlacementExample> all;
  for (Split s : kAllSplits) {
    if (train_only && s != Split::train) continue;
    auto it = examples.find(s);
    if (it != examples.end()) all.insert(all.end(), it->second.begin(), it->second.end());
  }
  return candidate_pool(all);
}

}  // namespace worldgen
