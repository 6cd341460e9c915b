#include <algorithm>
#include <cmath>

#include "worldgen/corpus.hpp"
#include "worldgen/rng.hpp"
#include "worldgen/text.hpp"

namespace worldgen {

std::string encode_text(std::string_view name, std::string_view description, FeatureMode mode) {
  std::string out(name);
  if (mode == FeatureMode::name_and_description && !trim(description).empty()) {
    out += " . ";
    out += description;
  }
  return out;
}

namespace {

template <class Card>
std::string gold_text_of(const Card* card, const std::string& written, FeatureMode mode,
                         std::string* gold_name) {
  if (!card) {
    *gold_name = written;
    return written;
  }
  *gold_name = card->name;
  return encode_text(card->name, card->description, mode);
}

void emit_for_location(const Corpus& corpus, const LocationCard& src, Task task, FeatureMode mode,
                       std::vector<PlacementExample>& out) {
  const std::string context = encode_text(src.name, src.description, mode);
  const std::vector<std::string>* targets = nullptr;
  switch (task) {
    case Task::location: targets = &src.neighbors; break;
    case Task::character: targets = &src.characters; break;
    case Task::object: targets = &src.objects; break;
    case Task::container: return;
  }
  for (const auto& t : *targets) {
    PlacementExample ex;
    ex.task = task;
    ex.context_text = context;
    ex.source_id = src.id;
    switch (task) {
      case Task::location:
        ex.gold_text = gold_text_of(corpus.find_location(t), t, mode, &ex.gold);
        break;
      case Task::character:
        ex.gold_text = gold_text_of(corpus.find_character(t), t, mode, &ex.gold);
        break;
      default:
        ex.gold_text = gold_text_of(corpus.find_object(t), t, mode, &ex.gold);
        break;
    }
    out.push_back(std::move(ex));
  }
}

void emit_for_container(const Corpus& corpus, const ObjectCard& src,
                        std::vector<PlacementExample>& out) {
  // Containers are always encoded by name only.
  for (const auto& t : src.contained_examples) {
    PlacementExample ex;
    ex.task = Task::container;
    ex.context_text = src.name;
    ex.source_id = src.id;
    const ObjectCard* card = corpus.find_object(t);
    ex.gold = card ? card->name : t;
    ex.gold_text = ex.gold;
    out.push_back(std::move(ex));
  }
}

}  // namespace

SplitExamples derive_examples(const Corpus& corpus, Task task, FeatureMode mode) {
  auto it = corpus.splits().find(task);
  if (it == corpus.splits().end()) {
    throw std::invalid_argument("corpus has no splits for task " + std::string(to_string(task)));
  }
  SplitExamples out;
  for (Split split : kAllSplits) {
    auto& bucket = out[split];
    auto ids = it->second.find(split);
    if (ids == it->second.end()) continue;
    for (const auto& id : ids->second) {
      if (task == Task::container) {
        if (const ObjectCard* o = corpus.object_by_id(id)) emit_for_container(corpus, *o, bucket);
      } else if (const LocationCard* l = corpus.location_by_id(id)) {
        emit_for_location(corpus, *l, task, mode, bucket);
      }
    }
  }
  return out;
}

std::vector<std::string> split_elements(const Corpus& corpus, Task task) {
  std::vector<std::string> ids;
  if (task == Task::container) {
    for (const auto& o : corpus.objects()) {
      if (o.is_container()) ids.push_back(o.id);
    }
  } else {
    for (const auto* l : corpus.regular_locations()) ids.push_back(l->id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::array<std::size_t, 3> allocate_counts(std::size_t n, SplitRatios r) {
  const std::array<double, 3> ratios = {r.train, r.valid, r.test};
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double exact = ratios[i] * static_cast<double>(n);
    // Guard against 0.8 * 40 landing at 31.999999.
    counts[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[order[k % 3]];
  return counts;
}

Corpus make_splits(const Corpus& corpus, SplitRatios ratios, std::uint64_t seed, bool overwrite) {
  if (!(ratios.train > 0 && ratios.valid > 0 && ratios.test > 0) ||
      std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9) {
    throw std::invalid_argument("split ratios must be positive and sum to 1");
  }
  Splits splits = corpus.splits();
  for (Task task : kAllTasks) {
    if (!overwrite && splits.count(task)) continue;
    std::vector<std::string> ids = split_elements(corpus, task);
    // Same seed and same element set give the same partition, so the three
    // location-sourced tasks share one partition.
    Stream rng(seed);
    rng.shuffle(ids);
    const auto counts = allocate_counts(ids.size(), ratios);
    TaskSplits ts;
    std::size_t pos = 0;
    for (std::size_t s = 0; s < 3; ++s) {
      std::vector<std::string> part(ids.begin() + static_cast<std::ptrdiff_t>(pos),
                                    ids.begin() + static_cast<std::ptrdiff_t>(pos + counts[s]));
      std::sort(part.begin(), part.end());
      ts[kAllSplits[s]] = std::move(part);
      pos += counts[s];
    }
    splits[task] = std::move(ts);
  }
  return corpus.with_splits(std::move(splits));
}

}  // namespace worldgen
