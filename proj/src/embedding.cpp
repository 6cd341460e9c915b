#include "worldgen/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "worldgen/rng.hpp"
#include "worldgen/text.hpp"

namespace worldgen {

using nlohmann::json;

void EmbeddingScorerParams::validate() const {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (!(max_norm > 0)) throw std::invalid_argument("max_norm must be positive");
  if (!(learning_rate > 0)) throw std::invalid_argument("learning_rate must be positive");
  if (!(input_dropout >= 0 && input_dropout < 1)) {
    throw std::invalid_argument("input_dropout must be in [0, 1)");
  }
  if (!(margin > 0)) throw std::invalid_argument("margin must be positive");
  if (negatives < 1) throw std::invalid_argument("negatives must be >= 1");
  if (!(init_scale > 0)) throw std::invalid_argument("init_scale must be positive");
  if (subword_init && buckets < 1) throw std::invalid_argument("buckets must be >= 1");
}

json to_json(const EmbeddingScorerParams& p) {
  return {{"dim", p.dim},
          {"max_norm", p.max_norm},
          {"learning_rate", p.learning_rate},
          {"input_dropout", p.input_dropout},
          {"margin", p.margin},
          {"negatives", p.negatives},
          {"epochs", p.epochs},
          {"seed", p.seed},
          {"init_scale", p.init_scale},
          {"subword_init", p.subword_init},
          {"buckets", p.buckets},
          {"freeze_embeddings", p.freeze_embeddings}};
}

EmbeddingScorerParams params_from_json(const json& j) {
  EmbeddingScorerParams p;
  p.dim = j.at("dim").get<std::size_t>();
  p.max_norm = j.at("max_norm").get<double>();
  p.learning_rate = j.at("learning_rate").get<double>();
  p.input_dropout = j.at("input_dropout").get<double>();
  p.margin = j.at("margin").get<double>();
  p.negatives = j.at("negatives").get<std::size_t>();
  p.epochs = j.at("epochs").get<std::size_t>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.init_scale = j.at("init_scale").get<double>();
  p.subword_init = j.at("subword_init").get<bool>();
  p.buckets = j.at("buckets").get<std::size_t>();
  p.freeze_embeddings = j.at("freeze_embeddings").get<bool>();
  return p;
}

double dot(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

std::vector<std::size_t> subword_buckets(const std::string& token, std::size_t buckets) {
  const std::string padded = "<" + token + ">";
  std::vector<std::size_t> out;
  for (std::size_t n = 3; n <= 5; ++n) {
    if (padded.size() < n) break;
    for (std::size_t i = 0; i + n <= padded.size(); ++i) {
      out.push_back(fnv1a(std::string_view(padded).substr(i, n)) % buckets);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

EmbeddingModel::EmbeddingModel(Vocabulary vocab, EmbeddingScorerParams params,
                               std::vector<float> rows, std::vector<float> bucket_rows,
                               TrainingMetadata meta)
    : vocab_(std::move(vocab)),
      params_(params),
      rows_(std::move(rows)),
      bucket_rows_(std::move(bucket_rows)),
      meta_(std::move(meta)) {
  if (rows_.size() != vocab_.size() * params_.dim) {
    throw std::invalid_argument("embedding matrix does not match vocabulary size");
  }
  if (bucket_rows_.size() % params_.dim != 0) {
    throw std::invalid_argument("bucket matrix width does not match dim");
  }
}

std::vector<float> EmbeddingModel::pool(const std::string& text) const {
  const std::size_t d = params_.dim;
  std::vector<float> acc(d, 0.0f);
  std::size_t used = 0;
  const std::size_t nb = bucket_count();
  for (const auto& tok : tokenize(text)) {
    const auto idx = vocab_.index(tok);
    if (idx >= 0) {
      auto r = row(static_cast<std::size_t>(idx));
      for (std::size_t k = 0; k < d; ++k) acc[k] += r[k];
      ++used;
    } else if (nb > 0) {
      const auto ids = subword_buckets(tok, nb);
      if (ids.empty()) continue;
      const float inv = 1.0f / static_cast<float>(ids.size());
      for (auto b : ids) {
        const float* r = bucket_rows_.data() + b * d;
        for (std::size_t k = 0; k < d; ++k) acc[k] += r[k] * inv;
      }
      ++used;
    }
  }
  if (used > 1) {
    const float inv = 1.0f / static_cast<float>(used);
    for (auto& v : acc) v *= inv;
  }
  return acc;
}

double EmbeddingModel::max_row_norm() const {
  double best = 0.0;
  for (std::size_t t = 0; t < vocab_.size(); ++t) {
    auto r = row(t);
    best = std::max(best, std::sqrt(dot(r, r)));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Training

namespace {

using TokenIds = std::vector<std::uint32_t>;

TokenIds to_ids(const Vocabulary& vocab, const std::string& text) {
  TokenIds ids;
  for (const auto& tok : tokenize(text)) {
    const auto i = vocab.index(tok);
    if (i >= 0) ids.push_back(static_cast<std::uint32_t>(i));
  }
  return ids;
}

struct TaskPool {
  std::vector<TokenIds> texts;
  std::vector<std::string> keys;  // folded names
};

class Trainer {
 public:
  Trainer(const EmbeddingScorerParams& p, std::size_t vocab_size)
      : p_(p), d_(p.dim), rows_(vocab_size * p.dim), grad_(vocab_size * p.dim, 0.0f),
        is_touched_(vocab_size, 0) {}

  std::vector<float>& rows() { return rows_; }

  void pool_into(const TokenIds& ids, std::vector<float>& out) const {
    std::fill(out.begin(), out.end(), 0.0f);
    for (auto t : ids) {
      const float* r = rows_.data() + static_cast<std::size_t>(t) * d_;
      for (std::size_t k = 0; k < d_; ++k) out[k] += r[k];
    }
    if (ids.size() > 1) {
      const float inv = 1.0f / static_cast<float>(ids.size());
      for (auto& v : out) v *= inv;
    }
  }

  // Accumulates scale * vec into every row listed in ids (divided by the
  // pooled count, matching the mean's Jacobian).
  void accumulate(const TokenIds& ids, const std::vector<float>& vec, float scale) {
    if (ids.empty()) return;
    const float s = scale / static_cast<float>(ids.size());
    for (auto t : ids) {
      float* g = grad_.data() + static_cast<std::size_t>(t) * d_;
      for (std::size_t k = 0; k < d_; ++k) g[k] += s * vec[k];
      if (!is_touched_[t]) {
        is_touched_[t] = 1;
        touched_.push_back(t);
      }
    }
  }

  void apply() {
    const float lr = static_cast<float>(p_.learning_rate);
    const double cap = p_.max_norm;
    std::sort(touched_.begin(), touched_.end());
    for (auto t : touched_) {
      is_touched_[t] = 0;
      float* r = rows_.data() + static_cast<std::size_t>(t) * d_;
      float* g = grad_.data() + static_cast<std::size_t>(t) * d_;
      double sq = 0.0;
      for (std::size_t k = 0; k < d_; ++k) {
        r[k] -= lr * g[k];
        g[k] = 0.0f;
        sq += static_cast<double>(r[k]) * r[k];
      }
      const double norm = std::sqrt(sq);
      if (norm > cap) {
        const float s = static_cast<float>(cap / norm);
        for (std::size_t k = 0; k < d_; ++k) r[k] *= s;
      }
    }
    touched_.clear();
  }

 private:
  const EmbeddingScorerParams& p_;
  std::size_t d_;
  std::vector<float> rows_;
  std::vector<float> grad_;
  std::vector<std::uint32_t> touched_;
  std::vector<char> is_touched_;
};

void renormalize(std::vector<float>& rows, std::size_t d, double cap) {
  for (std::size_t off = 0; off < rows.size(); off += d) {
    double sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) sq += static_cast<double>(rows[off + k]) * rows[off + k];
    const double norm = std::sqrt(sq);
    if (norm > cap) {
      const float s = static_cast<float>(cap / norm);
      for (std::size_t k = 0; k < d; ++k) rows[off + k] *= s;
    }
  }
}

}  // namespace

TrainingResult train_embedding_scorer(const std::vector<PlacementExample>& examples,
                                      const CandidatePools& pools,
                                      const EmbeddingScorerParams& params,
                                      FeatureMode feature_mode) {
  params.validate();
  if (examples.empty()) throw std::invalid_argument("no training examples");

  std::set<Task> tasks;
  for (const auto& ex : examples) tasks.insert(ex.task);
  for (Task t : tasks) {
    auto it = pools.find(t);
    if (it == pools.end() || it->second.empty()) {
      throw std::invalid_argument("empty candidate pool for task " + std::string(to_string(t)));
    }
  }

  std::vector<std::string> docs;
  for (const auto& ex : examples) {
    docs.push_back(ex.context_text);
    docs.push_back(ex.gold_text);
  }
  for (Task t : tasks) {
    for (const auto& c : pools.at(t)) docs.push_back(c.text);
  }
  Vocabulary vocab = Vocabulary::fit(docs);

  const std::size_t d = params.dim;
  Stream rng(params.seed);
  Trainer trainer(params, vocab.size());
  std::vector<float>& rows = trainer.rows();
  const float scale = static_cast<float>(params.init_scale);

  std::vector<float> bucket_rows;
  if (params.subword_init) {
    bucket_rows.resize(params.buckets * d);
    for (auto& v : bucket_rows) v = static_cast<float>((2.0 * rng.uniform() - 1.0) * scale);
    for (std::size_t t = 0; t < vocab.size(); ++t) {
      const auto ids = subword_buckets(vocab.token(t), params.buckets);
      const float inv = 1.0f / static_cast<float>(ids.size());
      for (auto b : ids) {
        for (std::size_t k = 0; k < d; ++k) rows[t * d + k] += bucket_rows[b * d + k] * inv;
      }
    }
  } else {
    for (auto& v : rows) v = static_cast<float>((2.0 * rng.uniform() - 1.0) * scale);
  }
  renormalize(rows, d, params.max_norm);

  std::map<Task, TaskPool> task_pools;
  for (Task t : tasks) {
    TaskPool tp;
    for (const auto& c : pools.at(t)) {
      tp.texts.push_back(to_ids(vocab, c.text));
      tp.keys.push_back(fold_name(c.name));
    }
    task_pools.emplace(t, std::move(tp));
  }
  for (const auto& ex : examples) {
    const auto& tp = task_pools.at(ex.task);
    const std::string key = fold_name(ex.gold);
    if (std::all_of(tp.keys.begin(), tp.keys.end(), [&](const auto& k) { return k == key; })) {
      throw std::invalid_argument("candidate pool for task " + std::string(to_string(ex.task)) +
                                  " has no negatives");
    }
  }

  std::vector<TokenIds> contexts, golds;
  std::vector<std::string> gold_keys;
  for (const auto& ex : examples) {
    contexts.push_back(to_ids(vocab, ex.context_text));
    golds.push_back(to_ids(vocab, ex.gold_text));
    gold_keys.push_back(fold_name(ex.gold));
  }

  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<float> c(d), g(d), n(d), diff(d);
  std::vector<std::size_t> negs;
  std::vector<double> trace;
  const std::size_t k = params.negatives;
  const float inv_k = 1.0f / static_cast<float>(k);

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0.0;
    for (std::size_t idx : order) {
      const auto& ex = examples[idx];
      const auto& tp = task_pools.at(ex.task);

      TokenIds ctx;
      for (auto t : contexts[idx]) {
        if (!rng.bernoulli(params.input_dropout)) ctx.push_back(t);
      }
      negs.clear();
      while (negs.size() < k) {
        const auto j = static_cast<std::size_t>(rng.below(tp.keys.size()));
        if (tp.keys[j] != gold_keys[idx]) negs.push_back(j);
      }

      trainer.pool_into(ctx, c);
      trainer.pool_into(golds[idx], g);
      const double pos = dot(c, g);

      std::fill(diff.begin(), diff.end(), 0.0f);
      std::size_t active = 0;
      double loss = 0.0;
      for (auto j : negs) {
        trainer.pool_into(tp.texts[j], n);
        const double l = params.margin - pos + dot(c, n);
        if (l <= 0) continue;
        loss += l;
        ++active;
        if (params.freeze_embeddings) continue;
        for (std::size_t q = 0; q < d; ++q) diff[q] += n[q] - g[q];
        // d loss / d negative = c
        trainer.accumulate(tp.texts[j], c, inv_k);
      }
      total += loss / static_cast<double>(k);
      if (active == 0 || params.freeze_embeddings) continue;
      // d loss / d context = sum(n - g); d loss / d gold = -active * c
      trainer.accumulate(ctx, diff, inv_k);
      trainer.accumulate(golds[idx], c, -static_cast<float>(active) * inv_k);
      trainer.apply();
    }
    trace.push_back(total / static_cast<double>(examples.size()));
  }

  TrainingMetadata meta;
  meta.epochs_run = params.epochs;
  meta.final_loss = trace.empty() ? 0.0 : trace.back();
  meta.seed = params.seed;
  meta.tasks.assign(tasks.begin(), tasks.end());
  meta.feature_mode = feature_mode;

  auto model = std::make_shared<const EmbeddingModel>(std::move(vocab), params, std::move(rows),
                                                      std::move(bucket_rows), std::move(meta));
  if (trace.empty()) trace.push_back(0.0);
  return {std::move(model), std::move(trace)};
}

// ---------------------------------------------------------------------------

void EmbeddingScorer::prepare(std::span<const std::string> texts) {
  for (const auto& t : texts) {
    if (!cache_.count(t)) cache_.emplace(t, model_->pool(t));
  }
}

std::vector<double> EmbeddingScorer::score(const ScorerInput& input) const {
  if (input.candidates.empty()) throw std::invalid_argument("empty candidate list");
  auto pooled = [&](const std::string& text, std::vector<float>& local) -> const std::vector<float>& {
    auto it = cache_.find(text);
    if (it != cache_.end()) return it->second;
    local = model_->pool(text);
    return local;
  };
  std::vector<float> ctx_local, cand_local;
  const auto& ctx = pooled(input.context_text, ctx_local);
  std::vector<double> out;
  out.reserve(input.candidates.size());
  for (const auto& c : input.candidates) out.push_back(dot(ctx, pooled(c.text, cand_local)));
  return out;
}

}  // namespace worldgen
