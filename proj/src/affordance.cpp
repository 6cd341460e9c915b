#include "worldgen/affordance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "worldgen/text.hpp"

namespace worldgen {

namespace {

std::string feature_text(const std::string& name, const std::string& description) {
  return description.empty() ? name : name + " " + description;
}

// Sorted distinct vocabulary indices present in the text.
std::vector<std::size_t> features(const Vocabulary& vocab, const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& tok : tokenize(text)) {
    const auto i = vocab.index(tok);
    if (i >= 0) out.push_back(static_cast<std::size_t>(i));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

std::vector<AffordanceExample> affordance_examples(const Corpus& corpus) {
  std::vector<AffordanceExample> out;
  for (const auto& o : corpus.objects()) {
    AffordanceSet labels = o.affordance_set();
    if (labels.size() == 0) continue;
    out.push_back({o.name, o.description, labels});
  }
  return out;
}

AffordanceModel AffordanceModel::zeros(Vocabulary vocab) {
  AffordanceModel m;
  m.vocab = std::move(vocab);
  for (auto& w : m.weights) w.assign(m.vocab.size(), 0.0);
  return m;
}

AffordanceModel train_affordance_model(std::span<const AffordanceExample> examples,
                                       const AffordanceTrainingParams& params) {
  if (examples.empty()) throw std::invalid_argument("affordance training set is empty");

  std::vector<std::string> docs;
  docs.reserve(examples.size());
  for (const auto& e : examples) docs.push_back(feature_text(e.name, e.description));
  AffordanceModel model = AffordanceModel::zeros(Vocabulary::fit(docs));

  std::vector<std::vector<std::size_t>> x;
  x.reserve(docs.size());
  for (const auto& d : docs) x.push_back(features(model.vocab, d));

  const double n = static_cast<double>(examples.size());
  const std::size_t dim = model.vocab.size();
  double total_loss = 0.0;
  std::size_t max_epochs_run = 0;

  for (std::size_t l = 0; l < kNumAffordances; ++l) {
    const auto label = static_cast<Affordance>(l);
    std::vector<double> y(examples.size());
    std::size_t positives = 0;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      y[i] = examples[i].labels.contains(label) ? 1.0 : 0.0;
      positives += y[i] > 0;
    }

    if (positives == 0 || positives == examples.size()) {
      model.degenerate[l] = true;
      const double rate = (static_cast<double>(positives) + 0.5) / (n + 1.0);
      model.bias[l] = logit(rate);
      total_loss += -(positives ? std::log(rate) : std::log(1.0 - rate));
      continue;
    }

    auto& w = model.weights[l];
    double& b = model.bias[l];
    std::vector<double> grad(dim);
    double prev = INFINITY;
    double loss = 0.0;
    std::size_t epoch = 0;
    for (; epoch < params.max_epochs; ++epoch) {
      std::fill(grad.begin(), grad.end(), 0.0);
      double grad_b = 0.0;
      loss = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        double z = b;
        for (auto f : x[i]) z += w[f];
        const double p = sigmoid(z);
        loss -= y[i] > 0 ? std::log(std::max(p, 1e-300)) : std::log(std::max(1.0 - p, 1e-300));
        const double r = p - y[i];
        for (auto f : x[i]) grad[f] += r;
        grad_b += r;
      }
      loss /= n;
      double reg = 0.0;
      for (double v : w) reg += v * v;
      loss += 0.5 * params.l2 * reg;
      if (std::abs(prev - loss) < params.tolerance) break;
      prev = loss;
      for (std::size_t f = 0; f < dim; ++f) {
        w[f] -= params.learning_rate * (grad[f] / n + params.l2 * w[f]);
      }
      b -= params.learning_rate * grad_b / n;
    }
    max_epochs_run = std::max(max_epochs_run, epoch);
    total_loss += loss;
  }

  model.epochs_run = max_epochs_run;
  model.final_loss = total_loss / static_cast<double>(kNumAffordances);
  return model;
}

AffordancePrediction predict_affordances(const AffordanceModel& model, const std::string& name,
                                         const std::string& description) {
  const auto x = features(model.vocab, feature_text(name, description));
  AffordancePrediction out;
  for (std::size_t l = 0; l < kNumAffordances; ++l) {
    double z = model.bias[l];
    if (!model.degenerate[l]) {
      for (auto f : x) z += model.weights[l][f];
    }
    const double p = sigmoid(z);
    out.probabilities[l] = p;
    if (p >= model.threshold[l]) out.labels.insert(static_cast<Affordance>(l));
  }
  return out;
}

double MultiLabelScore::precision() const {
  const auto d = true_positives + false_positives;
  return d ? static_cast<double>(true_positives) / static_cast<double>(d) : 0.0;
}

double MultiLabelScore::recall() const {
  const auto d = true_positives + false_negatives;
  return d ? static_cast<double>(true_positives) / static_cast<double>(d) : 0.0;
}

double MultiLabelScore::f1() const {
  const auto d = 2 * true_positives + false_positives + false_negatives;
  return d ? 2.0 * static_cast<double>(true_positives) / static_cast<double>(d) : 0.0;
}

MultiLabelScore micro_score(std::span<const AffordanceSet> predicted,
                            std::span<const AffordanceSet> gold) {
  if (predicted.size() != gold.size()) throw std::invalid_argument("prediction/gold size mismatch");
  MultiLabelScore s;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (std::size_t l = 0; l < kNumAffordances; ++l) {
      const auto a = static_cast<Affordance>(l);
      const bool p = predicted[i].contains(a);
      const bool g = gold[i].contains(a);
      s.true_positives += p && g;
      s.false_positives += p && !g;
      s.false_negatives += !p && g;
    }
  }
  return s;
}

AffordanceSet majority_labels(std::span<const AffordanceExample> examples) {
  AffordanceSet out;
  for (std::size_t l = 0; l < kNumAffordances; ++l) {
    const auto a = static_cast<Affordance>(l);
    std::size_t pos = 0;
    for (const auto& e : examples) pos += e.labels.contains(a);
    if (2 * pos > examples.size()) out.insert(a);
  }
  return out;
}

}  // namespace worldgen
