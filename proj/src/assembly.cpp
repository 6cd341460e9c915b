#include "worldgen/assembly.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <span>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#include "worldgen/text.hpp"

namespace worldgen {

void GenerationConfig::validate() const {
  if (grid_width < 1 || grid_height < 1) throw std::invalid_argument("grid dims must be >= 1");
  if (!(filler_prob >= 0 && filler_prob <= 1)) {
    throw std::invalid_argument("filler probability must be in [0, 1]");
  }
  if (!(blocked_fraction >= 0 && blocked_fraction < 1)) {
    throw std::invalid_argument("blocked fraction must be in [0, 1)");
  }
  if (!(extra_connect_prob >= 0 && extra_connect_prob <= 1)) {
    throw std::invalid_argument("extra connect probability must be in [0, 1]");
  }
  if (!(count_success > 0 && count_success <= 1)) {
    throw std::invalid_argument("count success probability must be in (0, 1]");
  }
  if (max_characters < 0 || max_objects < 0 || max_contained < 0) {
    throw std::invalid_argument("population caps must be non-negative");
  }
  const std::size_t cells = static_cast<std::size_t>(grid_width) * grid_height;
  if (max_locations < 1 || max_locations > cells - blocked_cells()) {
    throw std::invalid_argument("infeasible config: max_locations " +
                                std::to_string(max_locations) + " exceeds " +
                                std::to_string(cells - blocked_cells()) + " usable cells");
  }
}

std::size_t GenerationConfig::blocked_cells() const {
  const std::size_t cells = static_cast<std::size_t>(grid_width) * grid_height;
  auto blocked = static_cast<std::size_t>(std::floor(blocked_fraction * static_cast<double>(cells)));
  // The center is never blocked.
  return std::min(blocked, cells - 1);
}

// ---------------------------------------------------------------------------
// WorldGrid

WorldGrid::WorldGrid(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw std::invalid_argument("grid dims must be >= 1");
  cells_.resize(static_cast<std::size_t>(width) * height);
}

std::optional<std::size_t> WorldGrid::step(std::size_t i, Direction d) const {
  int x = x_of(i);
  int y = y_of(i);
  switch (d) {
    case Direction::north: --y; break;
    case Direction::east: ++x; break;
    case Direction::south: ++y; break;
    case Direction::west: --x; break;
  }
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return std::nullopt;
  return index(x, y);
}

std::vector<std::size_t> WorldGrid::neighbors(std::size_t i) const {
  std::vector<std::size_t> out;
  for (Direction d : {Direction::north, Direction::east, Direction::south, Direction::west}) {
    if (auto n = step(i, d)) out.push_back(*n);
  }
  return out;
}

bool WorldGrid::adjacent(std::size_t a, std::size_t b) const {
  if (!in_bounds(a) || !in_bounds(b)) return false;
  return std::abs(x_of(a) - x_of(b)) + std::abs(y_of(a) - y_of(b)) == 1;
}

void WorldGrid::block(std::size_t i) {
  clear(i);
  cells_.at(i).state = CellState::blocked;
}

void WorldGrid::fill(std::size_t i, PlacedLocation content) {
  Cell& c = cells_.at(i);
  c.state = CellState::filled;
  c.content = std::move(content);
}

PlacedLocation& WorldGrid::content(std::size_t i) {
  Cell& c = cells_.at(i);
  if (c.state != CellState::filled || !c.content) throw std::logic_error("cell is not filled");
  return *c.content;
}

void WorldGrid::clear(std::size_t i) {
  Cell& c = cells_.at(i);
  c.state = CellState::empty;
  c.content.reset();
  for (auto it = exits_.begin(); it != exits_.end();) {
    if (it->first == i || it->second == i) {
      it = exits_.erase(it);
    } else {
      ++it;
    }
  }
}

void WorldGrid::add_exit(std::size_t a, std::size_t b) {
  exits_.emplace(std::min(a, b), std::max(a, b));
}

void WorldGrid::remove_exit(std::size_t a, std::size_t b) {
  exits_.erase({std::min(a, b), std::max(a, b)});
}

bool WorldGrid::has_exit(std::size_t a, std::size_t b) const {
  return exits_.count({std::min(a, b), std::max(a, b)}) > 0;
}

std::size_t WorldGrid::exit_count(std::size_t i) const {
  std::size_t n = 0;
  for (const auto& [a, b] : exits_) n += (a == i) + (b == i);
  return n;
}

std::size_t WorldGrid::filled_count() const {
  return static_cast<std::size_t>(std::count_if(
      cells_.begin(), cells_.end(), [](const Cell& c) { return c.state == CellState::filled; }));
}

std::vector<std::size_t> WorldGrid::filled_cells() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].state == CellState::filled) out.push_back(i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Candidates

std::vector<Candidate> location_candidates(const Corpus& corpus, FeatureMode mode) {
  std::vector<Candidate> out;
  for (const auto* l : corpus.regular_locations()) {
    out.push_back({l->name, encode_text(l->name, l->description, mode)});
  }
  return out;
}

std::vector<Candidate> character_candidates(const Corpus& corpus, FeatureMode mode) {
  std::vector<Candidate> out;
  for (const auto& c : corpus.characters()) {
    out.push_back({c.name, encode_text(c.name, c.description, mode)});
  }
  return out;
}

std::vector<Candidate> object_candidates(const Corpus& corpus, FeatureMode mode) {
  std::vector<Candidate> out;
  for (const auto& o : corpus.objects()) {
    out.push_back({o.name, encode_text(o.name, o.description, mode)});
  }
  return out;
}

std::vector<std::string> scoring_texts(const Corpus& corpus, FeatureMode mode) {
  std::vector<std::string> out;
  for (const auto& l : corpus.locations()) out.push_back(encode_text(l.name, l.description, mode));
  for (const auto& c : character_candidates(corpus, mode)) out.push_back(c.text);
  for (const auto& o : corpus.objects()) {
    out.push_back(encode_text(o.name, o.description, mode));
    out.push_back(o.name);
  }
  return out;
}

namespace {

std::vector<std::size_t> top_ranked(const Scorer& scorer, ScorerInput input, std::size_t count) {
  if (count == 0 || input.candidates.empty()) return {};
  auto order = rank(scorer, input);
  order.resize(std::min(count, order.size()));
  return order;
}

std::string location_context(const LocationCard& l, FeatureMode mode) {
  return encode_text(l.name, l.description, mode);
}

}  // namespace

PlacedLocation populate_location(const LocationCard& location, const Corpus& corpus,
                                 const ScorerSet& scorers, const GenerationConfig& config,
                                 PopulationCounts counts, std::uint64_t nonce) {
  PlacedLocation placed;
  placed.location_id = location.id;
  placed.is_filler = location.is_filler;
  const std::string context = location_context(location, config.feature_mode);

  if (counts.characters > 0 && !corpus.characters().empty()) {
    ScorerInput in;
    in.context_text = context;
    in.candidates = character_candidates(corpus, config.feature_mode);
    in.task = Task::character;
    in.nonce = derive_seed(nonce, 1);
    for (auto i : top_ranked(*scorers.character, std::move(in), counts.characters)) {
      placed.characters.push_back(corpus.characters()[i].id);
    }
  }
  if (counts.objects > 0 && !corpus.objects().empty()) {
    ScorerInput in;
    in.context_text = context;
    in.candidates = object_candidates(corpus, config.feature_mode);
    in.task = Task::object;
    in.nonce = derive_seed(nonce, 2);
    for (auto i : top_ranked(*scorers.object, std::move(in), counts.objects)) {
      placed.objects.push_back({corpus.objects()[i].id, {}});
    }
  }
  return placed;
}

PlacedLocation populate_location(const LocationCard& location, const Corpus& corpus,
                                 const ScorerSet& scorers, const GenerationConfig& config,
                                 Stream& rng) {
  PopulationCounts counts;
  counts.characters =
      static_cast<std::size_t>(rng.truncated_geometric(config.count_success, config.max_characters));
  counts.objects =
      static_cast<std::size_t>(rng.truncated_geometric(config.count_success, config.max_objects));
  return populate_location(location, corpus, scorers, config, counts, rng.next());
}

namespace {

void fill_one(PlacedObject& obj, const ObjectCard& card, const Corpus& corpus,
              const Scorer& scorer, std::size_t count, std::uint64_t nonce) {
  if (count == 0) return;
  ScorerInput in;
  in.context_text = card.name;
  in.task = Task::container;
  in.nonce = nonce;
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < corpus.objects().size(); ++i) {
    if (corpus.objects()[i].id == card.id) continue;
    in.candidates.push_back({corpus.objects()[i].name, corpus.objects()[i].name});
    ids.push_back(i);
  }
  obj.contained.clear();
  for (auto i : top_ranked(scorer, std::move(in), count)) {
    obj.contained.push_back(corpus.objects()[ids[i]].id);
  }
}

}  // namespace

void fill_containers(PlacedLocation& placed, const Corpus& corpus, const Scorer& container_scorer,
                     std::size_t count, std::uint64_t nonce) {
  std::uint64_t k = 0;
  for (auto& obj : placed.objects) {
    const ObjectCard* card = corpus.object_by_id(obj.id);
    if (!card || !card->is_container()) continue;
    fill_one(obj, *card, corpus, container_scorer, count, derive_seed(nonce, k++));
  }
}

void fill_containers(PlacedLocation& placed, const Corpus& corpus, const Scorer& container_scorer,
                     const GenerationConfig& config, Stream& rng) {
  for (auto& obj : placed.objects) {
    const ObjectCard* card = corpus.object_by_id(obj.id);
    if (!card || !card->is_container()) continue;
    const auto count =
        static_cast<std::size_t>(rng.truncated_geometric(config.count_success, config.max_contained));
    fill_one(obj, *card, corpus, container_scorer, count, rng.next());
  }
}

// ---------------------------------------------------------------------------
// World creation

GameWorld create_world(const Corpus& corpus, const ScorerSet& scorers,
                       const GenerationConfig& config) {
  config.validate();
  const auto regular = corpus.regular_locations();
  if (regular.empty()) throw std::invalid_argument("corpus has no regular locations");
  const auto fillers = corpus.filler_locations();
  const auto all_candidates = location_candidates(corpus, config.feature_mode);

  Stream rng(config.seed);
  GameWorld world;
  world.grid = WorldGrid(config.grid_width, config.grid_height);
  world.config = config;
  world.created_at = config.timestamp;
  world.provenance.corpus_hash = [&] {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(corpus_hash(corpus)));
    return std::string(buf);
  }();
  world.provenance.scorers = {{"location", scorers.location->name()},
                              {"character", scorers.character->name()},
                              {"object", scorers.object->name()},
                              {"container", scorers.container->name()}};

  WorldGrid& grid = world.grid;
  const std::size_t center = grid.center();
  {
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (i != center) others.push_back(i);
    }
    for (auto p : rng.sample_indices(others.size(), config.blocked_cells())) grid.block(others[p]);
  }

  std::vector<bool> used(regular.size(), false);
  const std::size_t first = static_cast<std::size_t>(rng.below(regular.size()));
  used[first] = true;
  grid.fill(center, populate_location(*regular[first], corpus, scorers, config, rng));
  world.placement_order.push_back(center);

  std::deque<std::size_t> frontier = {center};
  std::size_t placed = 1;

  while (!frontier.empty() && placed < config.max_locations) {
    const std::size_t cur = frontier.front();
    frontier.pop_front();
    const LocationCard* cur_card = corpus.location_by_id(grid.cell(cur).content->location_id);

    std::array<Direction, 4> dirs = {Direction::north, Direction::east, Direction::south,
                                     Direction::west};
    rng.shuffle(std::span<Direction>(dirs));
    for (Direction d : dirs) {
      if (placed >= config.max_locations) break;
      const auto next = grid.step(cur, d);
      if (!next || grid.cell(*next).state != CellState::empty) continue;

      const LocationCard* chosen = nullptr;
      if (!fillers.empty() && rng.bernoulli(config.filler_prob)) {
        chosen = fillers[static_cast<std::size_t>(rng.below(fillers.size()))];
      } else {
        ScorerInput in;
        in.context_text = location_context(*cur_card, config.feature_mode);
        in.task = Task::location;
        std::vector<std::size_t> ids;
        for (std::size_t i = 0; i < regular.size(); ++i) {
          if (used[i]) continue;
          in.candidates.push_back(all_candidates[i]);
          ids.push_back(i);
        }
        if (in.candidates.empty()) continue;
        in.nonce = rng.next();
        const auto scores = scorers.location->score(in);
        const std::size_t best = rank_scores(scores).front();
        if (config.min_score_threshold && scores[best] <= *config.min_score_threshold) break;
        used[ids[best]] = true;
        chosen = regular[ids[best]];
      }

      grid.fill(*next, populate_location(*chosen, corpus, scorers, config, rng));
      grid.add_exit(cur, *next);
      for (std::size_t other : grid.neighbors(*next)) {
        if (other == cur || grid.cell(other).state != CellState::filled) continue;
        if (rng.bernoulli(config.extra_connect_prob)) grid.add_exit(*next, other);
      }
      world.placement_order.push_back(*next);
      frontier.push_back(*next);
      ++placed;
    }
  }

  for (std::size_t cell : world.placement_order) {
    fill_containers(grid.content(cell), corpus, *scorers.container, config, rng);
  }
  return world;
}

std::vector<GameWorld> create_worlds_serial(const Corpus& corpus, const ScorerSet& scorers,
                                            const GenerationConfig& config, std::size_t count) {
  std::vector<GameWorld> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    GenerationConfig c = config;
    c.seed = config.seed + i;
    out.push_back(create_world(corpus, scorers, c));
  }
  return out;
}

std::vector<GameWorld> create_worlds(const Corpus& corpus, const ScorerSet& scorers,
                                     const GenerationConfig& config, std::size_t count) {
  config.validate();
  std::vector<GameWorld> out(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
  bool failed = false;
  std::string error;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      GenerationConfig c = config;
      c.seed = config.seed + static_cast<std::uint64_t>(i);
      out[static_cast<std::size_t>(i)] = create_world(corpus, scorers, c);
    } catch (const std::exception& e) {
#pragma omp critical(worldgen_build_error)
      {
        if (!failed) error = e.what();
        failed = true;
      }
    }
  }
  if (failed) throw std::runtime_error(error);
  return out;
}

}  // namespace worldgen
