#include "worldgen/evaluation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "worldgen/rng.hpp"
#include "worldgen/text.hpp"

namespace worldgen {

using nlohmann::json;

std::string_view to_string(DistractorSource s) {
  return s == DistractorSource::task_all_pool ? "task_all_pool" : "task_train_pool";
}

DistractorSource parse_distractor_source(std::string_view s) {
  if (s == "task_all_pool" || s == "all") return DistractorSource::task_all_pool;
  if (s == "task_train_pool" || s == "train") return DistractorSource::task_train_pool;
  throw std::invalid_argument("unknown distractor source: " + std::string(s));
}

ScorerInput evaluation_input(const PlacementExample& example, std::size_t index,
                             std::span<const Candidate> pool, const EvalConfig& config,
                             std::size_t* gold_index) {
  const std::string gold_key = fold_name(example.gold);
  std::vector<std::size_t> eligible;
  eligible.reserve(pool.size());
  for (std::size_t j = 0; j < pool.size(); ++j) {
    if (fold_name(pool[j].name) != gold_key) eligible.push_back(j);
  }
  const std::size_t need = config.num_candidates - 1;
  if (eligible.size() < need) {
    throw std::invalid_argument("distractor pool too small: need " + std::to_string(need) +
                                ", have " + std::to_string(eligible.size()));
  }
  Stream rng(derive_seed(config.seed, index));
  const auto picks = rng.sample_indices(eligible.size(), need);
  const auto gold_pos = static_cast<std::size_t>(rng.below(config.num_candidates));

  ScorerInput input;
  input.context_text = example.context_text;
  input.task = example.task;
  input.nonce = rng.next();
  input.candidates.reserve(config.num_candidates);
  for (auto p : picks) input.candidates.push_back(pool[eligible[p]]);
  input.candidates.insert(input.candidates.begin() + static_cast<std::ptrdiff_t>(gold_pos),
                          Candidate{example.gold, example.gold_text});
  if (gold_index) *gold_index = gold_pos;
  return input;
}

namespace {

void check_inputs(std::span<const PlacementExample> examples, const EvalConfig& config) {
  if (config.num_candidates < 2) throw std::invalid_argument("num_candidates must be >= 2");
  for (const auto& ex : examples) {
    if (ex.task != examples.front().task) {
      throw std::invalid_argument("evaluation examples must come from a single task");
    }
  }
}

EvalRecord evaluate_one(const Scorer& scorer, const PlacementExample& ex, std::size_t i,
                        std::span<const Candidate> pool, const EvalConfig& config) {
  std::size_t gold_index = 0;
  const ScorerInput input = evaluation_input(ex, i, pool, config, &gold_index);
  const auto order = rank(scorer, input);
  EvalRecord rec;
  rec.context = ex.context_text;
  rec.gold = ex.gold;
  rec.top1 = input.candidates[order.front()].name;
  rec.gold_rank = static_cast<std::size_t>(
      std::find(order.begin(), order.end(), gold_index) - order.begin());
  return rec;
}

EvalReport finish(const Scorer& scorer, std::span<const PlacementExample> examples,
                  const EvalConfig& config, std::vector<EvalRecord> records) {
  EvalReport report;
  report.task = examples.empty() ? Task::location : examples.front().task;
  report.feature_mode = config.feature_mode;
  report.scorer = scorer.name();
  report.config = config;
  std::size_t hits = 0;
  for (const auto& r : records) hits += r.gold_rank == 0;
  report.hits_at_1 =
      records.empty() ? 0.0 : 100.0 * static_cast<double>(hits) / static_cast<double>(records.size());
  report.records = std::move(records);
  return report;
}

void precheck_pool(std::span<const PlacementExample> examples, std::span<const Candidate> pool,
                   const EvalConfig& config) {
  std::set<std::string> keys;
  for (const auto& c : pool) keys.insert(fold_name(c.name));
  for (const auto& ex : examples) {
    const std::size_t eligible = keys.size() - keys.count(fold_name(ex.gold));
    if (eligible < config.num_candidates - 1) {
      throw std::invalid_argument("distractor pool too small: need " +
                                  std::to_string(config.num_candidates - 1) + ", have " +
                                  std::to_string(eligible));
    }
  }
}

}  // namespace

EvalReport hits_at_1_serial(const Scorer& scorer, std::span<const PlacementExample> examples,
                            std::span<const Candidate> pool, const EvalConfig& config) {
  check_inputs(examples, config);
  std::vector<EvalRecord> records;
  records.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    records.push_back(evaluate_one(scorer, examples[i], i, pool, config));
  }
  return finish(scorer, examples, config, std::move(records));
}

EvalReport hits_at_1(const Scorer& scorer, std::span<const PlacementExample> examples,
                     std::span<const Candidate> pool, const EvalConfig& config) {
  check_inputs(examples, config);
  precheck_pool(examples, pool, config);
  std::vector<EvalRecord> records(examples.size());
  const auto n = static_cast<std::ptrdiff_t>(examples.size());
  bool failed = false;
  std::string error;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const auto u = static_cast<std::size_t>(i);
      records[u] = evaluate_one(scorer, examples[u], u, pool, config);
    } catch (const std::exception& e) {
#pragma omp critical(worldgen_eval_error)
      {
        if (!failed) error = e.what();
        failed = true;
      }
    }
  }
  if (failed) throw std::runtime_error(error);
  return finish(scorer, examples, config, std::move(records));
}

json to_json(const EvalReport& r) {
  json records = json::array();
  for (const auto& rec : r.records) {
    records.push_back({{"context", rec.context},
                       {"gold", rec.gold},
                       {"top1", rec.top1},
                       {"gold_rank", rec.gold_rank}});
  }
  return {{"task", to_string(r.task)},
          {"feature_mode", to_string(r.feature_mode)},
          {"scorer", r.scorer},
          {"num_candidates", r.config.num_candidates},
          {"distractor_source", to_string(r.config.distractor_source)},
          {"seed", r.config.seed},
          {"examples", r.records.size()},
          {"hits_at_1", r.hits_at_1},
          {"records", std::move(records)}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string to_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "index,context,gold,top1,gold_rank\n";
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& rec = r.records[i];
    out << i << ',' << csv_field(rec.context) << ',' << csv_field(rec.gold) << ','
        << csv_field(rec.top1) << ',' << rec.gold_rank << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

double f1_overlap(const std::string& predicted, const std::string& gold) {
  const auto p = tokenize(predicted);
  const auto g = tokenize(gold);
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  std::map<std::string, int> gold_counts;
  for (const auto& t : g) ++gold_counts[t];
  std::size_t common = 0;
  for (const auto& t : p) {
    auto it = gold_counts.find(t);
    if (it != gold_counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  // Equal to 2PR / (P + R), computed with a single rounding.
  return 2.0 * static_cast<double>(common) / static_cast<double>(p.size() + g.size());
}

namespace {

std::vector<std::string> ngrams(const std::string& text, std::size_t n) {
  const auto toks = tokenize(text);
  std::vector<std::string> out;
  if (toks.size() < n) return out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    std::string g = toks[i];
    for (std::size_t k = 1; k < n; ++k) {
      g.push_back(' ');
      g += toks[i + k];
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

double ngram_novelty(std::span<const std::string> generated, std::span<const std::string> train,
                     std::size_t n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  std::set<std::string> seen;
  for (const auto& t : train) {
    for (auto& g : ngrams(t, n)) seen.insert(std::move(g));
  }
  std::size_t total = 0;
  std::size_t present = 0;
  for (const auto& t : generated) {
    for (const auto& g : ngrams(t, n)) {
      ++total;
      present += seen.count(g);
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(present) / static_cast<double>(total);
}

}  // namespace worldgen
