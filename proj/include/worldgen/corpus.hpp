#pragma once

// Element cards (locations, characters, objects), the corpus that holds them,
// validation, supervised example derivation and element-level splits.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace worldgen {

enum class Task { location, character, object, container };
inline constexpr std::array<Task, 4> kAllTasks = {Task::location, Task::character, Task::object,
                                                  Task::container};

enum class FeatureMode { name_only, name_and_description };
enum class Split { train, valid, test };
inline constexpr std::array<Split, 3> kAllSplits = {Split::train, Split::valid, Split::test};

std::string_view to_string(Task t);
std::string_view to_string(FeatureMode m);
std::string_view to_string(Split s);
/// Throws std::invalid_argument("unknown task: ...").
Task parse_task(std::string_view s);
FeatureMode parse_feature_mode(std::string_view s);
Split parse_split(std::string_view s);

enum class Affordance : std::uint8_t {
  gettable,
  wearable,
  wieldable,
  drinkable,
  edible,
  container,
  surface,
};
inline constexpr std::size_t kNumAffordances = 7;
inline constexpr std::array<std::string_view, kNumAffordances> kAffordanceNames = {
    "gettable", "wearable", "wieldable", "drinkable", "edible", "container", "surface"};

std::optional<Affordance> parse_affordance(std::string_view s);

class AffordanceSet {
 public:
  AffordanceSet() = default;
  bool contains(Affordance a) const { return bits_ & bit(a); }
  void insert(Affordance a) { bits_ |= bit(a); }
  std::size_t size() const;
  std::vector<std::string> names() const;
  bool operator==(const AffordanceSet&) const = default;

 private:
  static std::uint8_t bit(Affordance a) { return static_cast<std::uint8_t>(1u << static_cast<int>(a)); }
  std::uint8_t bits_ = 0;
};

struct LocationCard {
  std::string id;
  std::string name;
  std::string description;
  std::string background;
  std::vector<std::string> neighbors;
  std::vector<std::string> characters;
  std::vector<std::string> objects;
  std::string category;
  bool is_filler = false;
  bool generated = false;
  bool operator==(const LocationCard&) const = default;
};

struct CharacterCard {
  std::string id;
  std::string name;
  std::string persona;
  std::string description;
  std::vector<std::string> carrying;
  std::vector<std::string> wearing;
  std::vector<std::string> wielding;
  bool generated = false;
  bool operator==(const CharacterCard&) const = default;
};

struct ObjectCard {
  std::string id;
  std::string name;
  std::string description;
  // Kept as raw labels so validation can report unknown or repeated ones.
  std::vector<std::string> affordances;
  std::vector<std::string> contained_examples;
  std::string size_tag;
  bool generated = false;

  AffordanceSet affordance_set() const;
  bool is_container() const { return affordance_set().contains(Affordance::container); }
  bool operator==(const ObjectCard&) const = default;
};

using TaskSplits = std::map<Split, std::vector<std::string>>;
using Splits = std::map<Task, TaskSplits>;

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnreadableFile : public CorpusError {
 public:
  using CorpusError::CorpusError;
};
class MalformedJson : public CorpusError {
 public:
  using CorpusError::CorpusError;
};
class DuplicateId : public CorpusError {
 public:
  using CorpusError::CorpusError;
};

/// Immutable after construction. Locations include filler cards (is_filler).
class Corpus {
 public:
  Corpus() = default;
  /// Throws DuplicateId when two cards of the same kind share an id.
  Corpus(std::vector<LocationCard> locations, std::vector<CharacterCard> characters,
         std::vector<ObjectCard> objects, Splits splits = {});

  const std::vector<LocationCard>& locations() const { return locations_; }
  const std::vector<CharacterCard>& characters() const { return characters_; }
  const std::vector<ObjectCard>& objects() const { return objects_; }
  const Splits& splits() const { return splits_; }

  // Lookups by case-folded, whitespace-normalized name. First card wins on
  // collisions (validation reports them).
  const LocationCard* find_location(std::string_view name) const;
  const CharacterCard* find_character(std::string_view name) const;
  const ObjectCard* find_object(std::string_view name) const;

  const LocationCard* location_by_id(std::string_view id) const;
  const CharacterCard* character_by_id(std::string_view id) const;
  const ObjectCard* object_by_id(std::string_view id) const;

  std::vector<const LocationCard*> regular_locations() const;
  std::vector<const LocationCard*> filler_locations() const;

  Corpus with_splits(Splits splits) const;

  bool operator==(const Corpus& o) const {
    return locations_ == o.locations_ && characters_ == o.characters_ &&
           objects_ == o.objects_ && splits_ == o.splits_;
  }

 private:
  void build_index();

  std::vector<LocationCard> locations_;
  std::vector<CharacterCard> characters_;
  std::vector<ObjectCard> objects_;
  Splits splits_;

  std::unordered_map<std::string, std::size_t> location_ids_, character_ids_, object_ids_;
  std::unordered_map<std::string, std::size_t> location_names_, character_names_, object_names_;
};

Corpus load_corpus(const std::filesystem::path& path);
/// Throws MalformedJson on schema violations, DuplicateId on id clashes.
Corpus corpus_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const Corpus& corpus);
nlohmann::json to_json(const LocationCard& card);
nlohmann::json to_json(const CharacterCard& card);
nlohmann::json to_json(const ObjectCard& card);
LocationCard location_from_json(const nlohmann::json& j);
CharacterCard character_from_json(const nlohmann::json& j);
ObjectCard object_from_json(const nlohmann::json& j);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

/// FNV-1a over the canonical JSON dump; recorded in world provenance.
std::uint64_t corpus_hash(const Corpus& corpus);

enum class Severity { warning, error };

struct Issue {
  Severity severity = Severity::error;
  std::string card_id;
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Issue> issues;
  bool empty() const { return issues.empty(); }
  std::size_t count(std::string_view code) const;
  std::size_t errors() const;
};

nlohmann::json to_json(const ValidationReport& report);

ValidationReport validate(const Corpus& corpus);

struct PlacementExample {
  Task task = Task::location;
  std::string context_text;
  std::string gold;       // candidate name
  std::string gold_text;  // candidate encoded for the feature mode
  std::string source_id;
};

using SplitExamples = std::map<Split, std::vector<PlacementExample>>;

/// "name" or "name . description" depending on mode.
std::string encode_text(std::string_view name, std::string_view description, FeatureMode mode);

/// Throws std::invalid_argument when the corpus has no splits for the task.
SplitExamples derive_examples(const Corpus& corpus, Task task, FeatureMode mode);

/// Ids the task is partitioned over: regular locations for the location,
/// character and object tasks; container objects for the container task.
std::vector<std::string> split_elements(const Corpus& corpus, Task task);

struct SplitRatios {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

/// Largest-remainder partition of each task's elements. Tasks that already
/// have splits are left alone unless overwrite is set.
/// Throws std::invalid_argument for non-positive ratios or a sum != 1.
Corpus make_splits(const Corpus& corpus, SplitRatios ratios, std::uint64_t seed,
                   bool overwrite = false);

/// Largest-remainder allocation of n items over the three ratios.
std::array<std::size_t, 3> allocate_counts(std::size_t n, SplitRatios ratios);

}  // namespace worldgen
