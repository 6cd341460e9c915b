#pragma once

// Grid world assembly: arrange locations outward from a random center,
// populate each with characters and objects, then fill containers.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "worldgen/corpus.hpp"
#include "worldgen/ranking.hpp"
#include "worldgen/rng.hpp"

namespace worldgen {

struct GenerationConfig {
  int grid_width = 10;
  int grid_height = 10;
  std::size_t max_locations = 50;
  double filler_prob = 0.15;
  double blocked_fraction = 0.1;
  double extra_connect_prob = 0.5;
  /// Expansion from a location stops once the best candidate scores at or
  /// below this value. Off by default (fixed-size mode).
  std::optional<double> min_score_threshold;
  std::uint64_t seed = 0;
  FeatureMode feature_mode = FeatureMode::name_and_description;

  // Per-location population counts: geometric(count_success) capped.
  double count_success = 0.5;
  int max_characters = 15;
  int max_objects = 15;
  int max_contained = 3;

  /// Written verbatim into the world so exports stay byte-reproducible.
  std::string timestamp = "1970-01-01T00:00:00Z";

  /// Throws std::invalid_argument on range errors or when max_locations
  /// exceeds the unblocked cell count.
  void validate() const;
  std::size_t blocked_cells() const;
};

nlohmann::json to_json(const GenerationConfig& c);
GenerationConfig generation_config_from_json(const nlohmann::json& j);

enum class CellState { blocked, empty, filled };

struct PlacedObject {
  std::string id;
  std::vector<std::string> contained;  // object ids, leaves only
  bool operator==(const PlacedObject&) const = default;
};

struct PlacedLocation {
  std::string location_id;
  bool is_filler = false;
  std::vector<std::string> characters;  // character ids
  std::vector<PlacedObject> objects;
  bool operator==(const PlacedLocation&) const = default;
};

struct Cell {
  CellState state = CellState::empty;
  std::optional<PlacedLocation> content;
  bool operator==(const Cell&) const = default;
};

enum class Direction { north, east, south, west };

class WorldGrid {
 public:
  using Exit = std::pair<std::size_t, std::size_t>;  // first < second

  WorldGrid() = default;
  WorldGrid(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return cells_.size(); }
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y * width_ + x); }
  int x_of(std::size_t i) const { return static_cast<int>(i) % width_; }
  int y_of(std::size_t i) const { return static_cast<int>(i) / width_; }
  std::size_t center() const { return index(width_ / 2, height_ / 2); }
  bool in_bounds(std::size_t i) const { return i < cells_.size(); }

  const Cell& cell(std::size_t i) const { return cells_.at(i); }
  std::optional<std::size_t> step(std::size_t i, Direction d) const;
  /// In-bounds orthogonal neighbors in N, E, S, W order.
  std::vector<std::size_t> neighbors(std::size_t i) const;
  bool adjacent(std::size_t a, std::size_t b) const;

  void block(std::size_t i);
  void fill(std::size_t i, PlacedLocation content);
  /// Mutable access to a filled cell's content.
  PlacedLocation& content(std::size_t i);
  /// Empties the cell and drops its exits.
  void clear(std::size_t i);

  /// Records an exit without checking adjacency (validation reports misuse).
  void add_exit(std::size_t a, std::size_t b);
  void remove_exit(std::size_t a, std::size_t b);
  bool has_exit(std::size_t a, std::size_t b) const;
  const std::set<Exit>& exits() const { return exits_; }
  std::size_t exit_count(std::size_t i) const;

  std::size_t filled_count() const;
  std::vector<std::size_t> filled_cells() const;

  /// Test hook: force a raw cell (lets tests build invalid worlds).
  void set_cell(std::size_t i, Cell c) { cells_.at(i) = std::move(c); }

  bool operator==(const WorldGrid&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Cell> cells_;
  std::set<Exit> exits_;
};

struct Provenance {
  std::map<std::string, std::string> scorers;
  std::string corpus_hash;
  bool operator==(const Provenance&) const = default;
};

struct GameWorld {
  WorldGrid grid;
  GenerationConfig config;
  Provenance provenance;
  std::string created_at;
  std::vector<std::size_t> placement_order;
  /// Cards created for names absent from the corpus (interactive sessions).
  nlohmann::json generated_elements = nlohmann::json::array();
};

nlohmann::json to_json(const GameWorld& world);
GameWorld world_from_json(const nlohmann::json& j);
std::string export_world_json(const GameWorld& world);

struct ScorerSet {
  std::shared_ptr<const Scorer> location;
  std::shared_ptr<const Scorer> character;
  std::shared_ptr<const Scorer> object;
  std::shared_ptr<const Scorer> container;

  static ScorerSet uniform(std::shared_ptr<const Scorer> s) { return {s, s, s, s}; }
};

/// Every text a world build will score (contexts and candidates), for
/// Scorer::prepare.
std::vector<std::string> scoring_texts(const Corpus& corpus, FeatureMode mode);

/// Candidate lists in corpus order.
std::vector<Candidate> location_candidates(const Corpus& corpus, FeatureMode mode);
std::vector<Candidate> character_candidates(const Corpus& corpus, FeatureMode mode);
std::vector<Candidate> object_candidates(const Corpus& corpus, FeatureMode mode);

struct PopulationCounts {
  std::size_t characters = 0;
  std::size_t objects = 0;
};

/// Draws counts from the configured distribution, then populates.
PlacedLocation populate_location(const LocationCard& location, const Corpus& corpus,
                                 const ScorerSet& scorers, const GenerationConfig& config,
                                 Stream& rng);
/// Takes the top counts.characters / counts.objects ranked candidates.
PlacedLocation populate_location(const LocationCard& location, const Corpus& corpus,
                                 const ScorerSet& scorers, const GenerationConfig& config,
                                 PopulationCounts counts, std::uint64_t nonce = 0);

/// Gives each container object a drawn number of top-ranked contents.
void fill_containers(PlacedLocation& placed, const Corpus& corpus, const Scorer& container_scorer,
                     const GenerationConfig& config, Stream& rng);
/// Fixed number of contents per container object.
void fill_containers(PlacedLocation& placed, const Corpus& corpus, const Scorer& container_scorer,
                     std::size_t count, std::uint64_t nonce = 0);

/// Throws std::invalid_argument for an infeasible config or a corpus without
/// regular locations.
GameWorld create_world(const Corpus& corpus, const ScorerSet& scorers,
                       const GenerationConfig& config);

/// World i uses seed config.seed + i. The parallel version distributes worlds
/// over OpenMP threads; the serial one is the reference.
std::vector<GameWorld> create_worlds(const Corpus& corpus, const ScorerSet& scorers,
                                     const GenerationConfig& config, std::size_t count);
std::vector<GameWorld> create_worlds_serial(const Corpus& corpus, const ScorerSet& scorers,
                                            const GenerationConfig& config, std::size_t count);

/// Grid invariants plus reachability of every filled cell from the center.
/// With a corpus, also checks card references and container affordances.
ValidationReport validate_world(const GameWorld& world, const Corpus* corpus = nullptr);

struct DiversityReport {
  std::size_t maps = 0;
  std::size_t total_placements = 0;
  std::map<std::string, std::size_t> location_frequency;  // all placements incl. filler
  std::vector<std::size_t> location_coverage;   // distinct regular locations after m maps
  std::vector<std::size_t> character_coverage;
  std::vector<std::size_t> object_coverage;     // placed and contained objects
  std::map<std::size_t, std::size_t> locations_per_map;
  std::map<std::size_t, std::size_t> characters_per_location;
  std::map<std::size_t, std::size_t> objects_per_location;
};

/// Throws std::invalid_argument on an empty batch.
DiversityReport diversity_report(std::span<const GameWorld> worlds);
nlohmann::json to_json(const DiversityReport& report);
std::string location_frequency_csv(const DiversityReport& report);
std::string coverage_csv(const DiversityReport& report);
std::string histograms_csv(const DiversityReport& report);

}  // namespace worldgen
