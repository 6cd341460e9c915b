#include "worldgen/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "worldgen/rng.hpp"
#include "worldgen/text.hpp"

namespace worldgen {

using nlohmann::json;

std::string_view to_string(Task t) {
  switch (t) {
    case Task::location: return "location";
    case Task::character: return "character";
    case Task::object: return "object";
    case Task::container: return "container";
  }
  return "?";
}

std::string_view to_string(FeatureMode m) {
  return m == FeatureMode::name_only ? "name_only" : "name_and_description";
}

std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::valid: return "valid";
    case Split::test: return "test";
  }
  return "?";
}

Task parse_task(std::string_view s) {
  for (Task t : kAllTasks) {
    if (to_string(t) == s) return t;
  }
  throw std::invalid_argument("unknown task: " + std::string(s));
}

FeatureMode parse_feature_mode(std::string_view s) {
  if (s == "name_only") return FeatureMode::name_only;
  if (s == "name_and_description") return FeatureMode::name_and_description;
  throw std::invalid_argument("unknown feature mode: " + std::string(s));
}

Split parse_split(std::string_view s) {
  for (Split sp : kAllSplits) {
    if (to_string(sp) == s) return sp;
  }
  throw std::invalid_argument("unknown split: " + std::string(s));
}

std::optional<Affordance> parse_affordance(std::string_view s) {
  for (std::size_t i = 0; i < kNumAffordances; ++i) {
    if (kAffordanceNames[i] == s) return static_cast<Affordance>(i);
  }
  return std::nullopt;
}

std::size_t AffordanceSet::size() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < kNumAffordances; ++i) n += contains(static_cast<Affordance>(i));
  return n;
}

std::vector<std::string> AffordanceSet::names() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < kNumAffordances; ++i) {
    if (contains(static_cast<Affordance>(i))) out.emplace_back(kAffordanceNames[i]);
  }
  return out;
}

AffordanceSet ObjectCard::affordance_set() const {
  AffordanceSet set;
  for (const auto& label : affordances) {
    if (auto a = parse_affordance(fold_name(label))) set.insert(*a);
  }
  return set;
}

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(std::vector<LocationCard> locations, std::vector<CharacterCard> characters,
               std::vector<ObjectCard> objects, Splits splits)
    : locations_(std::move(locations)),
      characters_(std::move(characters)),
      objects_(std::move(objects)),
      splits_(std::move(splits)) {
  build_index();
}

namespace {

template <class Card>
void index_cards(const std::vector<Card>& cards, std::string_view kind,
                 std::unordered_map<std::string, std::size_t>& ids,
                 std::unordered_map<std::string, std::size_t>& names) {
  ids.clear();
  names.clear();
  for (std::size_t i = 0; i < cards.size(); ++i) {
    if (!ids.emplace(cards[i].id, i).second) {
      throw DuplicateId("duplicate " + std::string(kind) + " id: " + cards[i].id);
    }
    names.emplace(fold_name(cards[i].name), i);
  }
}

template <class Card>
const Card* lookup(const std::vector<Card>& cards,
                   const std::unordered_map<std::string, std::size_t>& index,
                   const std::string& key) {
  auto it = index.find(key);
  return it == index.end() ? nullptr : &cards[it->second];
}

}  // namespace

void Corpus::build_index() {
  index_cards(locations_, "location", location_ids_, location_names_);
  index_cards(characters_, "character", character_ids_, character_names_);
  index_cards(objects_, "object", object_ids_, object_names_);
}

const LocationCard* Corpus::find_location(std::string_view name) const {
  return lookup(locations_, location_names_, fold_name(name));
}
const CharacterCard* Corpus::find_character(std::string_view name) const {
  return lookup(characters_, character_names_, fold_name(name));
}
const ObjectCard* Corpus::find_object(std::string_view name) const {
  return lookup(objects_, object_names_, fold_name(name));
}
const LocationCard* Corpus::location_by_id(std::string_view id) const {
  return lookup(locations_, location_ids_, std::string(id));
}
const CharacterCard* Corpus::character_by_id(std::string_view id) const {
  return lookup(characters_, character_ids_, std::string(id));
}
const ObjectCard* Corpus::object_by_id(std::string_view id) const {
  return lookup(objects_, object_ids_, std::string(id));
}

std::vector<const LocationCard*> Corpus::regular_locations() const {
  std::vector<const LocationCard*> out;
  for (const auto& l : locations_) {
    if (!l.is_filler) out.push_back(&l);
  }
  return out;
}

std::vector<const LocationCard*> Corpus::filler_locations() const {
  std::vector<const LocationCard*> out;
  for (const auto& l : locations_) {
    if (l.is_filler) out.push_back(&l);
  }
  return out;
}

Corpus Corpus::with_splits(Splits splits) const {
  Corpus copy = *this;
  copy.splits_ = std::move(splits);
  return copy;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::string get_string(const json& j, const char* key, bool required = false) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    if (required) throw MalformedJson(std::string("missing required field: ") + key);
    return {};
  }
  if (!it->is_string()) throw MalformedJson(std::string("field is not a string: ") + key);
  return it->get<std::string>();
}

std::vector<std::string> get_list(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_array()) throw MalformedJson(std::string("field is not an array: ") + key);
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) throw MalformedJson(std::string("non-string entry in: ") + key);
    out.push_back(v.get<std::string>());
  }
  return out;
}

bool get_bool(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return false;
  if (!it->is_boolean()) throw MalformedJson(std::string("field is not a boolean: ") + key);
  return it->get<bool>();
}

void require_object(const json& j, std::string_view what) {
  if (!j.is_object()) throw MalformedJson(std::string(what) + " entry is not an object");
}

}  // namespace

LocationCard location_from_json(const json& j) {
  require_object(j, "location");
  LocationCard c;
  c.id = get_string(j, "id", true);
  c.name = get_string(j, "name");
  c.description = get_string(j, "description");
  c.background = get_string(j, "background");
  c.neighbors = get_list(j, "neighbors");
  c.characters = get_list(j, "characters");
  c.objects = get_list(j, "objects");
  c.category = get_string(j, "category");
  c.is_filler = get_bool(j, "is_filler");
  c.generated = get_bool(j, "generated");
  return c;
}

CharacterCard character_from_json(const json& j) {
  require_object(j, "character");
  CharacterCard c;
  c.id = get_string(j, "id", true);
  c.name = get_string(j, "name");
  c.persona = get_string(j, "persona");
  c.description = get_string(j, "description");
  c.carrying = get_list(j, "carrying");
  c.wearing = get_list(j, "wearing");
  c.wielding = get_list(j, "wielding");
  c.generated = get_bool(j, "generated");
  return c;
}

ObjectCard object_from_json(const json& j) {
  require_object(j, "object");
  ObjectCard c;
  c.id = get_string(j, "id", true);
  c.name = get_string(j, "name");
  c.description = get_string(j, "description");
  c.affordances = get_list(j, "affordances");
  c.contained_examples = get_list(j, "contained_examples");
  c.size_tag = get_string(j, "size_tag");
  c.generated = get_bool(j, "generated");
  return c;
}

json to_json(const LocationCard& c) {
  json j = {{"id", c.id},
            {"name", c.name},
            {"description", c.description},
            {"background", c.background},
            {"neighbors", c.neighbors},
            {"characters", c.characters},
            {"objects", c.objects},
            {"category", c.category}};
  if (c.is_filler) j["is_filler"] = true;
  if (c.generated) j["generated"] = true;
  return j;
}

json to_json(const CharacterCard& c) {
  json j = {{"id", c.id},
            {"name", c.name},
            {"persona", c.persona},
            {"description", c.description},
            {"carrying", c.carrying},
            {"wearing", c.wearing},
            {"wielding", c.wielding}};
  if (c.generated) j["generated"] = true;
  return j;
}

json to_json(const ObjectCard& c) {
  json j = {{"id", c.id},
            {"name", c.name},
            {"description", c.description},
            {"affordances", c.affordances},
            {"contained_examples", c.contained_examples}};
  if (!c.size_tag.empty()) j["size_tag"] = c.size_tag;
  if (c.generated) j["generated"] = true;
  return j;
}

Corpus corpus_from_json(const json& doc) {
  if (!doc.is_object()) throw MalformedJson("corpus document must be a JSON object");

  auto array_of = [&](const char* key) -> const json* {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return nullptr;
    if (!it->is_array()) throw MalformedJson(std::string("top-level field is not an array: ") + key);
    return &*it;
  };

  std::vector<LocationCard> locations;
  if (const json* a = array_of("locations")) {
    for (const auto& j : *a) locations.push_back(location_from_json(j));
  }
  if (const json* a = array_of("filler_locations")) {
    for (const auto& j : *a) {
      LocationCard c = location_from_json(j);
      c.is_filler = true;
      locations.push_back(std::move(c));
    }
  }
  std::vector<CharacterCard> characters;
  if (const json* a = array_of("characters")) {
    for (const auto& j : *a) characters.push_back(character_from_json(j));
  }
  std::vector<ObjectCard> objects;
  if (const json* a = array_of("objects")) {
    for (const auto& j : *a) objects.push_back(object_from_json(j));
  }

  Splits splits;
  if (auto it = doc.find("splits"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) throw MalformedJson("splits must be an object");
    for (const auto& [task_name, per_split] : it->items()) {
      Task task;
      try {
        task = parse_task(task_name);
      } catch (const std::invalid_argument& e) {
        throw MalformedJson(e.what());
      }
      if (!per_split.is_object()) throw MalformedJson("splits." + task_name + " must be an object");
      TaskSplits ts;
      for (const auto& [split_name, ids] : per_split.items()) {
        Split split;
        try {
          split = parse_split(split_name);
        } catch (const std::invalid_argument& e) {
          throw MalformedJson(e.what());
        }
        if (!ids.is_array()) throw MalformedJson("split id list must be an array");
        std::vector<std::string> list;
        for (const auto& id : ids) {
          if (!id.is_string()) throw MalformedJson("split ids must be strings");
          list.push_back(id.get<std::string>());
        }
        ts[split] = std::move(list);
      }
      splits[task] = std::move(ts);
    }
  }

  return Corpus(std::move(locations), std::move(characters), std::move(objects), std::move(splits));
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UnreadableFile("cannot read corpus file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw UnreadableFile("error reading corpus file: " + path.string());
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw MalformedJson(std::string("invalid JSON in ") + path.string() + ": " + e.what());
  }
  return corpus_from_json(doc);
}

json to_json(const Corpus& corpus) {
  json locs = json::array();
  json fillers = json::array();
  for (const auto& l : corpus.locations()) {
    json j = to_json(l);
    if (l.is_filler) {
      j.erase("is_filler");
      fillers.push_back(std::move(j));
    } else {
      locs.push_back(std::move(j));
    }
  }
  json chars = json::array();
  for (const auto& c : corpus.characters()) chars.push_back(to_json(c));
  json objs = json::array();
  for (const auto& o : corpus.objects()) objs.push_back(to_json(o));

  json splits = json::object();
  for (const auto& [task, ts] : corpus.splits()) {
    json per = json::object();
    for (const auto& [split, ids] : ts) per[std::string(to_string(split))] = ids;
    splits[std::string(to_string(task))] = std::move(per);
  }
  return json{{"locations", std::move(locs)},
              {"filler_locations", std::move(fillers)},
              {"characters", std::move(chars)},
              {"objects", std::move(objs)},
              {"splits", std::move(splits)}};
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UnreadableFile("cannot write corpus file: " + path.string());
  out << to_json(corpus).dump(2) << '\n';
}

std::uint64_t corpus_hash(const Corpus& corpus) { return fnv1a(to_json(corpus).dump()); }

// ---------------------------------------------------------------------------
// Validation

std::size_t ValidationReport::count(std::string_view code) const {
  std::size_t n = 0;
  for (const auto& i : issues) n += i.code == code;
  return n;
}

std::size_t ValidationReport::errors() const {
  std::size_t n = 0;
  for (const auto& i : issues) n += i.severity == Severity::error;
  return n;
}

json to_json(const ValidationReport& report) {
  json arr = json::array();
  for (const auto& i : report.issues) {
    arr.push_back({{"severity", i.severity == Severity::error ? "error" : "warning"},
                   {"card_id", i.card_id},
                   {"code", i.code},
                   {"message", i.message}});
  }
  return arr;
}

namespace {

class Checker {
 public:
  explicit Checker(const Corpus& c) : corpus_(c) {}

  ValidationReport run() {
    check_collisions();
    for (const auto& l : corpus_.locations()) check_location(l);
    for (const auto& c : corpus_.characters()) check_character(c);
    for (const auto& o : corpus_.objects()) check_object(o);
    check_splits();
    return std::move(report_);
  }

 private:
  void add(Severity s, const std::string& id, std::string code, std::string msg) {
    report_.issues.push_back({s, id, std::move(code), std::move(msg)});
  }

  void check_name(const std::string& id, const std::string& name) {
    if (trim(name).empty()) add(Severity::error, id, "empty_name", "card name is empty");
  }

  void check_unique(const std::string& id, const std::vector<std::string>& list,
                    std::string_view field) {
    std::vector<std::string> seen;
    for (const auto& n : list) {
      std::string key = fold_name(n);
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
        add(Severity::error, id, "duplicate_entry",
            std::string(field) + " lists '" + n + "' more than once");
      }
      seen.push_back(std::move(key));
    }
  }

  template <class Finder>
  void check_refs(const std::string& id, const std::vector<std::string>& list,
                  std::string_view field, Finder find) {
    for (const auto& n : list) {
      if (!find(n)) {
        add(Severity::error, id, "dangling_reference",
            std::string(field) + " references unknown '" + n + "'");
      }
    }
  }

  void check_location(const LocationCard& l) {
    check_name(l.id, l.name);
    check_unique(l.id, l.neighbors, "neighbors");
    check_unique(l.id, l.characters, "characters");
    check_unique(l.id, l.objects, "objects");
    if (l.is_filler && (!l.neighbors.empty() || !l.characters.empty() || !l.objects.empty())) {
      add(Severity::error, l.id, "filler_content", "filler location carries annotations");
    }
    check_refs(l.id, l.neighbors, "neighbors",
               [&](const std::string& n) { return corpus_.find_location(n) != nullptr; });
    check_refs(l.id, l.characters, "characters",
               [&](const std::string& n) { return corpus_.find_character(n) != nullptr; });
    check_refs(l.id, l.objects, "objects",
               [&](const std::string& n) { return corpus_.find_object(n) != nullptr; });
  }

  void check_character(const CharacterCard& c) {
    check_name(c.id, c.name);
    const std::array<std::pair<const std::vector<std::string>*, std::string_view>, 3> lists = {
        {{&c.carrying, "carrying"}, {&c.wearing, "wearing"}, {&c.wielding, "wielding"}}};
    for (const auto& [list, field] : lists) {
      check_unique(c.id, *list, field);
      check_refs(c.id, *list, field,
                 [&](const std::string& n) { return corpus_.find_object(n) != nullptr; });
    }
    for (std::size_t a = 0; a < lists.size(); ++a) {
      for (std::size_t b = a + 1; b < lists.size(); ++b) {
        for (const auto& x : *lists[a].first) {
          for (const auto& y : *lists[b].first) {
            if (fold_name(x) == fold_name(y)) {
              add(Severity::error, c.id, "object_lists_overlap",
                  "'" + x + "' appears in both " + std::string(lists[a].second) + " and " +
                      std::string(lists[b].second));
            }
          }
        }
      }
    }
  }

  void check_object(const ObjectCard& o) {
    check_name(o.id, o.name);
    std::vector<std::string> seen;
    for (const auto& label : o.affordances) {
      std::string key = fold_name(label);
      if (!parse_affordance(key)) {
        add(Severity::error, o.id, "unknown_affordance", "unknown affordance '" + label + "'");
      }
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
        add(Severity::error, o.id, "duplicate_affordance", "affordance '" + label + "' repeated");
      }
      seen.push_back(std::move(key));
    }
    if (!o.contained_examples.empty() && !o.is_container()) {
      add(Severity::error, o.id, "contents_without_container",
          "contained_examples present but object lacks the container affordance");
    }
    check_unique(o.id, o.contained_examples, "contained_examples");
    check_refs(o.id, o.contained_examples, "contained_examples",
               [&](const std::string& n) { return corpus_.find_object(n) != nullptr; });
    if (!o.size_tag.empty() && o.size_tag != "small" && o.size_tag != "medium" &&
        o.size_tag != "large") {
      add(Severity::error, o.id, "invalid_size_tag", "size_tag must be small, medium or large");
    }
  }

  template <class Card>
  void collisions(const std::vector<Card>& cards, std::string_view kind) {
    std::unordered_map<std::string, const Card*> seen;
    for (const auto& c : cards) {
      auto [it, inserted] = seen.emplace(fold_name(c.name), &c);
      if (!inserted) {
        add(Severity::warning, c.id, "name_collision",
            std::string(kind) + " name '" + c.name + "' collides with card " + it->second->id);
      }
    }
  }

  void check_collisions() {
    collisions(corpus_.locations(), "location");
    collisions(corpus_.characters(), "character");
    collisions(corpus_.objects(), "object");
  }

  void check_splits() {
    for (const auto& [task, ts] : corpus_.splits()) {
      std::unordered_map<std::string, Split> owner;
      for (const auto& [split, ids] : ts) {
        for (const auto& id : ids) {
          bool known = task == Task::container ? corpus_.object_by_id(id) != nullptr
                                               : corpus_.location_by_id(id) != nullptr;
          if (!known) {
            add(Severity::error, id, "unknown_split_id",
                std::string(to_string(task)) + " split references unknown id");
          }
          auto [it, inserted] = owner.emplace(id, split);
          if (!inserted) {
            add(Severity::error, id, "split_overlap",
                std::string(to_string(task)) + " id appears in both " +
                    std::string(to_string(it->second)) + " and " + std::string(to_string(split)));
          }
        }
      }
    }
  }

  const Corpus& corpus_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate(const Corpus& corpus) { return Checker(corpus).run(); }

}  // namespace worldgen
