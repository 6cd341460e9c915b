#include <deque>
#include <set>
#include <sstream>

#include "worldgen/assembly.hpp"
#include "worldgen/evaluation.hpp"

namespace worldgen {

using nlohmann::json;

inline constexpr const char* kWorldFormat = "worldgen.world/1";

json to_json(const GenerationConfig& c) {
  json j = {{"grid_width", c.grid_width},
            {"grid_height", c.grid_height},
            {"max_locations", c.max_locations},
            {"filler_prob", c.filler_prob},
            {"blocked_fraction", c.blocked_fraction},
            {"extra_connect_prob", c.extra_connect_prob},
            {"min_score_threshold", nullptr},
            {"seed", c.seed},
            {"feature_mode", to_string(c.feature_mode)},
            {"count_success", c.count_success},
            {"max_characters", c.max_characters},
            {"max_objects", c.max_objects},
            {"max_contained", c.max_contained},
            {"timestamp", c.timestamp}};
  if (c.min_score_threshold) j["min_score_threshold"] = *c.min_score_threshold;
  return j;
}

GenerationConfig generation_config_from_json(const json& j) {
  GenerationConfig c;
  c.grid_width = j.value("grid_width", c.grid_width);
  c.grid_height = j.value("grid_height", c.grid_height);
  c.max_locations = j.value("max_locations", c.max_locations);
  c.filler_prob = j.value("filler_prob", c.filler_prob);
  c.blocked_fraction = j.value("blocked_fraction", c.blocked_fraction);
  c.extra_connect_prob = j.value("extra_connect_prob", c.extra_connect_prob);
  if (auto it = j.find("min_score_threshold"); it != j.end() && !it->is_null()) {
    c.min_score_threshold = it->get<double>();
  }
  c.seed = j.value("seed", c.seed);
  if (auto it = j.find("feature_mode"); it != j.end()) {
    c.feature_mode = parse_feature_mode(it->get<std::string>());
  }
  c.count_success = j.value("count_success", c.count_success);
  c.max_characters = j.value("max_characters", c.max_characters);
  c.max_objects = j.value("max_objects", c.max_objects);
  c.max_contained = j.value("max_contained", c.max_contained);
  c.timestamp = j.value("timestamp", c.timestamp);
  return c;
}

namespace {

std::string_view state_name(CellState s) {
  switch (s) {
    case CellState::blocked: return "blocked";
    case CellState::empty: return "empty";
    case CellState::filled: return "filled";
  }
  return "?";
}

CellState parse_state(const std::string& s) {
  if (s == "blocked") return CellState::blocked;
  if (s == "empty") return CellState::empty;
  if (s == "filled") return CellState::filled;
  throw std::invalid_argument("unknown cell state: " + s);
}

}  // namespace

json to_json(const GameWorld& w) {
  const WorldGrid& g = w.grid;
  json cells = json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Cell& c = g.cell(i);
    json jc = {{"index", i}, {"x", g.x_of(i)}, {"y", g.y_of(i)}, {"state", state_name(c.state)}};
    if (c.content) {
      json objects = json::array();
      for (const auto& o : c.content->objects) {
        objects.push_back({{"id", o.id}, {"contained", o.contained}});
      }
      jc["location_id"] = c.content->location_id;
      jc["filler"] = c.content->is_filler;
      jc["characters"] = c.content->characters;
      jc["objects"] = std::move(objects);
    }
    cells.push_back(std::move(jc));
  }
  json exits = json::array();
  for (const auto& [a, b] : g.exits()) exits.push_back({a, b});
  return {{"format", kWorldFormat},
          {"grid", {{"width", g.width()}, {"height", g.height()}}},
          {"cells", std::move(cells)},
          {"exits", std::move(exits)},
          {"placement_order", w.placement_order},
          {"config", to_json(w.config)},
          {"provenance",
           {{"scorers", w.provenance.scorers}, {"corpus_hash", w.provenance.corpus_hash}}},
          {"created_at", w.created_at},
          {"generated_elements", w.generated_elements}};
}

GameWorld world_from_json(const json& j) {
  if (j.value("format", std::string()) != kWorldFormat) {
    throw std::invalid_argument("not a world document (format tag missing or unknown)");
  }
  GameWorld w;
  const auto& grid = j.at("grid");
  w.grid = WorldGrid(grid.at("width").get<int>(), grid.at("height").get<int>());
  for (const auto& jc : j.at("cells")) {
    const auto i = jc.at("index").get<std::size_t>();
    if (!w.grid.in_bounds(i)) throw std::invalid_argument("cell index out of range");
    Cell c;
    c.state = parse_state(jc.at("state").get<std::string>());
    if (jc.contains("location_id")) {
      PlacedLocation p;
      p.location_id = jc.at("location_id").get<std::string>();
      p.is_filler = jc.value("filler", false);
      p.characters = jc.value("characters", std::vector<std::string>{});
      for (const auto& o : jc.value("objects", json::array())) {
        p.objects.push_back(
            {o.at("id").get<std::string>(), o.value("contained", std::vector<std::string>{})});
      }
      c.content = std::move(p);
    }
    w.grid.set_cell(i, std::move(c));
  }
  for (const auto& e : j.at("exits")) {
    w.grid.add_exit(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
  }
  w.placement_order = j.value("placement_order", std::vector<std::size_t>{});
  if (j.contains("config")) w.config = generation_config_from_json(j.at("config"));
  if (j.contains("provenance")) {
    const auto& p = j.at("provenance");
    w.provenance.scorers = p.value("scorers", std::map<std::string, std::string>{});
    w.provenance.corpus_hash = p.value("corpus_hash", std::string());
  }
  w.created_at = j.value("created_at", std::string());
  w.generated_elements = j.value("generated_elements", json::array());
  return w;
}

std::string export_world_json(const GameWorld& world) { return to_json(world).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_world(const GameWorld& world, const Corpus* corpus) {
  ValidationReport report;
  const WorldGrid& g = world.grid;
  auto add = [&](std::size_t cell, std::string code, std::string msg) {
    report.issues.push_back(
        {Severity::error, "cell:" + std::to_string(cell), std::move(code), std::move(msg)});
  };

  for (const auto& [a, b] : g.exits()) {
    if (!g.in_bounds(a) || !g.in_bounds(b)) {
      add(std::min(a, b), "exit_out_of_bounds", "exit references a cell outside the grid");
      continue;
    }
    if (!g.adjacent(a, b)) {
      add(a, "exit_not_adjacent",
          "exit joins non-adjacent cells " + std::to_string(a) + " and " + std::to_string(b));
    }
    if (g.cell(a).state != CellState::filled || g.cell(b).state != CellState::filled) {
      add(a, "exit_to_unfilled",
          "exit " + std::to_string(a) + "-" + std::to_string(b) + " touches an unfilled cell");
    }
  }

  std::map<std::string, std::size_t> seen_regular;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Cell& c = g.cell(i);
    if (g.exit_count(i) > 4) add(i, "too_many_exits", "cell has more than four exits");
    if (c.state == CellState::blocked && c.content) {
      add(i, "blocked_with_content", "blocked cell carries a location");
    }
    if (c.state == CellState::empty && c.content) {
      add(i, "empty_with_content", "empty cell carries a location");
    }
    if (c.state == CellState::filled && !c.content) {
      add(i, "filled_without_content", "filled cell has no location");
    }
    if (c.state != CellState::filled || !c.content) continue;

    const PlacedLocation& p = *c.content;
    if (!p.is_filler) {
      auto [it, inserted] = seen_regular.emplace(p.location_id, i);
      if (!inserted) {
        add(i, "duplicate_location",
            "location " + p.location_id + " also placed in cell " + std::to_string(it->second));
      }
    }
    std::set<std::string> chars(p.characters.begin(), p.characters.end());
    if (chars.size() != p.characters.size()) {
      add(i, "duplicate_character", "a character is placed twice in one location");
    }
    std::set<std::string> objs;
    for (const auto& o : p.objects) {
      if (!objs.insert(o.id).second) {
        add(i, "duplicate_object", "object " + o.id + " placed twice in one location");
      }
    }

    if (!corpus) continue;
    const LocationCard* card = corpus->location_by_id(p.location_id);
    if (!card) {
      add(i, "unknown_location", "unknown location id " + p.location_id);
    } else if (card->is_filler != p.is_filler) {
      add(i, "filler_flag_mismatch", "filler flag disagrees with the corpus card");
    }
    for (const auto& id : p.characters) {
      if (!corpus->character_by_id(id)) add(i, "unknown_character", "unknown character id " + id);
    }
    for (const auto& o : p.objects) {
      const ObjectCard* oc = corpus->object_by_id(o.id);
      if (!oc) {
        add(i, "unknown_object", "unknown object id " + o.id);
        continue;
      }
      if (!o.contained.empty() && !oc->is_container()) {
        add(i, "contents_without_container", "object " + o.id + " is not a container");
      }
      for (const auto& inner : o.contained) {
        if (!corpus->object_by_id(inner)) add(i, "unknown_object", "unknown object id " + inner);
      }
    }
  }

  const std::size_t center = g.size() ? g.center() : 0;
  const auto filled = g.filled_cells();
  if (world.config.max_locations > 0 && filled.size() > world.config.max_locations) {
    add(center, "too_many_locations", "more filled cells than max_locations");
  }
  if (!filled.empty()) {
    if (g.cell(center).state != CellState::filled) {
      add(center, "empty_center", "center cell is not filled");
    } else {
      std::vector<bool> reached(g.size(), false);
      std::deque<std::size_t> queue = {center};
      reached[center] = true;
      while (!queue.empty()) {
        const auto cur = queue.front();
        queue.pop_front();
        for (auto n : g.neighbors(cur)) {
          if (!reached[n] && g.cell(n).state == CellState::filled && g.has_exit(cur, n)) {
            reached[n] = true;
            queue.push_back(n);
          }
        }
      }
      for (auto i : filled) {
        if (!reached[i]) add(i, "unreachable", "cell is not reachable from the center");
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Diversity

DiversityReport diversity_report(std::span<const GameWorld> worlds) {
  if (worlds.empty()) throw std::invalid_argument("diversity report needs at least one world");
  DiversityReport r;
  r.maps = worlds.size();
  std::set<std::string> locs, chars, objs;
  for (const auto& w : worlds) {
    std::size_t placed = 0;
    for (std::size_t i = 0; i < w.grid.size(); ++i) {
      const Cell& c = w.grid.cell(i);
      if (c.state != CellState::filled || !c.content) continue;
      const PlacedLocation& p = *c.content;
      ++placed;
      ++r.total_placements;
      ++r.location_frequency[p.location_id];
      if (!p.is_filler) locs.insert(p.location_id);
      chars.insert(p.characters.begin(), p.characters.end());
      for (const auto& o : p.objects) {
        objs.insert(o.id);
        objs.insert(o.contained.begin(), o.contained.end());
      }
      ++r.characters_per_location[p.characters.size()];
      ++r.objects_per_location[p.objects.size()];
    }
    ++r.locations_per_map[placed];
    r.location_coverage.push_back(locs.size());
    r.character_coverage.push_back(chars.size());
    r.object_coverage.push_back(objs.size());
  }
  return r;
}

namespace {

json histogram_json(const std::map<std::size_t, std::size_t>& h) {
  json arr = json::array();
  for (const auto& [value, count] : h) arr.push_back({{"value", value}, {"count", count}});
  return arr;
}

}  // namespace

json to_json(const DiversityReport& r) {
  return {{"maps", r.maps},
          {"total_placements", r.total_placements},
          {"location_frequency", r.location_frequency},
          {"coverage",
           {{"locations", r.location_coverage},
            {"characters", r.character_coverage},
            {"objects", r.object_coverage}}},
          {"histograms",
           {{"locations_per_map", histogram_json(r.locations_per_map)},
            {"characters_per_location", histogram_json(r.characters_per_location)},
            {"objects_per_location", histogram_json(r.objects_per_location)}}}};
}

std::string location_frequency_csv(const DiversityReport& r) {
  std::ostringstream out;
  out << "location_id,count\n";
  for (const auto& [id, n] : r.location_frequency) out << csv_field(id) << ',' << n << '\n';
  return out.str();
}

std::string coverage_csv(const DiversityReport& r) {
  std::ostringstream out;
  out << "maps,locations,characters,objects\n";
  for (std::size_t m = 0; m < r.maps; ++m) {
    out << (m + 1) << ',' << r.location_coverage[m] << ',' << r.character_coverage[m] << ','
        << r.object_coverage[m] << '\n';
  }
  return out.str();
}

std::string histograms_csv(const DiversityReport& r) {
  std::ostringstream out;
  out << "histogram,value,count\n";
  const std::pair<const char*, const std::map<std::size_t, std::size_t>*> hs[] = {
      {"locations_per_map", &r.locations_per_map},
      {"characters_per_location", &r.characters_per_location},
      {"objects_per_location", &r.objects_per_location}};
  for (const auto& [name, h] : hs) {
    for (const auto& [value, count] : *h) out << name << ',' << value << ',' << count << '\n';
  }
  return out.str();
}

}  // namespace worldgen
