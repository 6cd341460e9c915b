#include "worldgen/service.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <set>

#include "worldgen/rng.hpp"
#include "worldgen/text.hpp"

namespace worldgen {

using nlohmann::json;
namespace fs = std::filesystem;

json ServiceError::body() const {
  json e = {{"code", code_}, {"message", what()}};
  if (!details_.is_null()) e["details"] = details_;
  return {{"error", e}};
}

SuggestKind parse_suggest_kind(std::string_view s) {
  if (s == "location") return SuggestKind::location;
  if (s == "character") return SuggestKind::character;
  if (s == "object") return SuggestKind::object;
  if (s == "contained") return SuggestKind::contained;
  throw ServiceError(400, "invalid_kind", "unknown kind: " + std::string(s));
}

std::string_view to_string(SuggestKind k) {
  switch (k) {
    case SuggestKind::location: return "location";
    case SuggestKind::character: return "character";
    case SuggestKind::object: return "object";
    case SuggestKind::contained: return "contained";
  }
  return "location";
}

json to_json(const Suggestion& s) {
  return {{"name", s.name}, {"score", s.score}, {"rank", s.rank}, {"kind", s.kind}};
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string random_token() {
  std::random_device rd;
  std::string out;
  char buf[9];
  for (int i = 0; i < 4; ++i) {
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(rd()));
    out += buf;
  }
  return out;
}

struct WorldService::Session {
  mutable std::mutex mu;
  SessionState state;
  std::vector<json> log;
};

namespace {

ServiceError bad_request(const std::string& code, const std::string& message) {
  return ServiceError(400, code, message);
}

ServiceError conflict(const std::string& code, const std::string& message) {
  return ServiceError(409, code, message);
}

template <class T>
T field(const json& req, const char* key) {
  if (!req.is_object() || !req.contains(key)) {
    throw bad_request("missing_field", std::string("missing field: ") + key);
  }
  try {
    return req.at(key).get<T>();
  } catch (const json::exception&) {
    throw bad_request("invalid_field", std::string("invalid field: ") + key);
  }
}

template <class T>
T field_or(const json& req, const char* key, T fallback) {
  if (!req.is_object() || !req.contains(key) || req.at(key).is_null()) return fallback;
  return field<T>(req, key);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void check_cell(const WorldGrid& g, std::size_t cell) {
  if (!g.in_bounds(cell)) {
    throw bad_request("invalid_cell", "cell " + std::to_string(cell) + " is outside the grid");
  }
}

void require_filled(const WorldGrid& g, std::size_t cell) {
  check_cell(g, cell);
  if (g.cell(cell).state != CellState::filled) {
    throw conflict("cell_not_filled", "cell " + std::to_string(cell) + " has no location");
  }
}

PlacedObject* find_placed_object(PlacedLocation& p, const std::string& id) {
  for (auto& o : p.objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

const PlacedObject* find_placed_object(const PlacedLocation& p, const std::string& id) {
  for (const auto& o : p.objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

}  // namespace

WorldService::WorldService(std::shared_ptr<const Corpus> corpus, ScorerSet scorers,
                           std::shared_ptr<const ElementGenerator> generator, ServiceConfig config)
    : base_(std::move(corpus)),
      scorers_(std::move(scorers)),
      generator_(std::move(generator)),
      config_(std::move(config)),
      merged_(base_) {
  if (!base_ || base_->regular_locations().empty()) {
    throw std::invalid_argument("service corpus has no regular locations");
  }
  if (!scorers_.location || !scorers_.character || !scorers_.object || !scorers_.container) {
    throw std::invalid_argument("service needs a scorer for every task");
  }
  if (config_.snapshot_every == 0) config_.snapshot_every = 100;
  if (!config_.data_dir.empty()) {
    fs::create_directories(config_.data_dir / "sessions");
    load_generated();
    load_sessions();
  }
}

WorldService::~WorldService() {
  try {
    flush();
  } catch (...) {
  }
}

std::shared_ptr<const Corpus> WorldService::merged() const {
  std::shared_lock lock(generated_mutex_);
  return merged_;
}

std::shared_ptr<WorldService::Session> WorldService::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw ServiceError(404, "unknown_session", "no session with id " + id);
  }
  return it->second;
}

std::vector<std::string> WorldService::session_ids() const {
  std::shared_lock lock(sessions_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

SessionState WorldService::state(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return s->state;
}

// ---------------------------------------------------------------------------
// Event application

void WorldService::apply(SessionState& s, const json& ev) const {
  const std::string type = ev.at("type").get<std::string>();
  if (type == "create") {
    s.id = ev.at("id").get<std::string>();
    s.width = ev.at("width").get<int>();
    s.height = ev.at("height").get<int>();
    s.seed = ev.at("seed").get<std::uint64_t>();
    s.suggestions_enabled = ev.at("suggestions_enabled").get<bool>();
    s.created_at = ev.at("at").get<std::string>();
    s.effective = {ev};
    rebuild(s);
  } else if (type == "undo") {
    if (s.effective.size() <= 1) throw conflict("nothing_to_undo", "no edit to undo");
    s.effective.pop_back();
    rebuild(s);
  } else {
    if (s.effective.empty()) throw bad_request("invalid_event", "session was never created");
    apply_edit(s, ev);
    s.effective.push_back(ev);
  }
  s.updated_at = ev.at("at").get<std::string>();
  ++s.event_count;
}

void WorldService::rebuild(SessionState& s) const {
  const json& create = s.effective.front();
  s.grid = WorldGrid(s.width, s.height);
  PlacedLocation center;
  center.location_id = create.at("center").get<std::string>();
  s.grid.fill(s.grid.center(), center);
  for (std::size_t i = 1; i < s.effective.size(); ++i) apply_edit(s, s.effective[i]);
}

void WorldService::apply_edit(SessionState& s, const json& ev) const {
  const auto corpus = merged();
  WorldGrid& g = s.grid;
  const std::string type = ev.at("type").get<std::string>();

  if (type == "exit") {
    const auto a = ev.at("a").get<std::size_t>();
    const auto b = ev.at("b").get<std::size_t>();
    check_cell(g, a);
    check_cell(g, b);
    if (!g.adjacent(a, b)) throw bad_request("invalid_exit", "cells are not orthogonally adjacent");
    if (ev.at("open").get<bool>()) {
      if (g.cell(a).state != CellState::filled || g.cell(b).state != CellState::filled) {
        throw conflict("exit_to_unfilled", "exits may only join two filled cells");
      }
      g.add_exit(a, b);
    } else {
      g.remove_exit(a, b);
    }
    return;
  }

  const auto cell = ev.at("cell").get<std::size_t>();
  const std::string kind = ev.at("kind").get<std::string>();
  const std::string id = ev.value("id", "");
  check_cell(g, cell);

  if (type == "place") {
    if (kind == "location") {
      if (g.cell(cell).state != CellState::empty) {
        throw conflict("cell_occupied", "cell " + std::to_string(cell) + " is not empty");
      }
      const LocationCard* card = corpus->location_by_id(id);
      if (!card) throw ServiceError(404, "unknown_element", "no location with id " + id);
      if (!card->is_filler) {
        for (auto other : g.filled_cells()) {
          if (g.cell(other).content->location_id == id) {
            throw conflict("duplicate_location",
                           "'" + card->name + "' is already placed in cell " + std::to_string(other));
          }
        }
      }
      std::vector<std::size_t> exits;
      if (ev.contains("exits") && !ev.at("exits").is_null()) {
        exits = ev.at("exits").get<std::vector<std::size_t>>();
        for (auto e : exits) {
          check_cell(g, e);
          if (!g.adjacent(cell, e)) {
            throw bad_request("invalid_exit", "cell " + std::to_string(e) + " is not adjacent");
          }
          if (g.cell(e).state != CellState::filled) {
            throw conflict("exit_to_unfilled", "cell " + std::to_string(e) + " has no location");
          }
        }
      } else {
        for (auto n : g.neighbors(cell)) {
          if (g.cell(n).state == CellState::filled) exits.push_back(n);
        }
      }
      PlacedLocation p;
      p.location_id = id;
      p.is_filler = card->is_filler;
      g.fill(cell, p);
      for (auto e : exits) g.add_exit(cell, e);
      return;
    }

    require_filled(g, cell);
    PlacedLocation& p = g.content(cell);
    if (kind == "character") {
      if (!corpus->character_by_id(id)) {
        throw ServiceError(404, "unknown_element", "no character with id " + id);
      }
      if (std::find(p.characters.begin(), p.characters.end(), id) != p.characters.end()) {
        throw conflict("duplicate_character", "character is already in this cell");
      }
      p.characters.push_back(id);
    } else if (kind == "object") {
      if (!corpus->object_by_id(id)) {
        throw ServiceError(404, "unknown_element", "no object with id " + id);
      }
      if (find_placed_object(p, id)) throw conflict("duplicate_object", "object is already in this cell");
      p.objects.push_back({id, {}});
    } else if (kind == "contained") {
      const std::string container = ev.at("container").get<std::string>();
      PlacedObject* host = find_placed_object(p, container);
      if (!host) throw conflict("container_not_placed", "container object is not in this cell");
      const ObjectCard* host_card = corpus->object_by_id(container);
      if (!host_card || !host_card->is_container()) {
        throw conflict("not_a_container", "object lacks the container affordance");
      }
      if (!corpus->object_by_id(id)) {
        throw ServiceError(404, "unknown_element", "no object with id " + id);
      }
      if (id == container) throw conflict("invalid_nesting", "an object cannot contain itself");
      if (std::find(host->contained.begin(), host->contained.end(), id) != host->contained.end()) {
        throw conflict("duplicate_object", "object is already in this container");
      }
      host->contained.push_back(id);
    } else {
      throw bad_request("invalid_kind", "unknown kind: " + kind);
    }
    return;
  }

  if (type == "remove") {
    require_filled(g, cell);
    if (kind == "location") {
      g.clear(cell);
      return;
    }
    PlacedLocation& p = g.content(cell);
    if (kind == "character") {
      auto it = std::find(p.characters.begin(), p.characters.end(), id);
      if (it == p.characters.end()) throw ServiceError(404, "element_not_placed", "character not in cell");
      p.characters.erase(it);
    } else if (kind == "object") {
      auto it = std::find_if(p.objects.begin(), p.objects.end(),
                             [&](const PlacedObject& o) { return o.id == id; });
      if (it == p.objects.end()) throw ServiceError(404, "element_not_placed", "object not in cell");
      p.objects.erase(it);
    } else if (kind == "contained") {
      PlacedObject* host = find_placed_object(p, ev.at("container").get<std::string>());
      if (!host) throw conflict("container_not_placed", "container object is not in this cell");
      auto it = std::find(host->contained.begin(), host->contained.end(), id);
      if (it == host->contained.end()) {
        throw ServiceError(404, "element_not_placed", "object not in container");
      }
      host->contained.erase(it);
    } else {
      throw bad_request("invalid_kind", "unknown kind: " + kind);
    }
    return;
  }

  throw bad_request("invalid_event", "unknown event type: " + type);
}

// ---------------------------------------------------------------------------
// Persistence

void WorldService::append_log(const Session& session, const json& event) const {
  if (config_.data_dir.empty()) return;
  const fs::path path = config_.data_dir / "sessions" / (session.state.id + ".jsonl");
  std::ofstream out(path, std::ios::app | std::ios::binary);
  out << event.dump() << '\n';
  out.flush();
  if (!out) throw ServiceError(500, "storage_error", "could not append to " + path.string());
}

void WorldService::write_snapshot(const Session& session) const {
  if (config_.data_dir.empty()) return;
  const fs::path dir = config_.data_dir / "sessions";
  const fs::path tmp = dir / (session.state.id + ".snapshot.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << json{{"event_count", session.state.event_count},
                {"updated_at", session.state.updated_at},
                {"effective", session.state.effective}}
               .dump();
    if (!out) throw ServiceError(500, "storage_error", "could not write snapshot");
  }
  fs::rename(tmp, dir / (session.state.id + ".snapshot.json"));
}

void WorldService::load_generated() {
  std::ifstream in(config_.data_dir / "generated.jsonl");
  std::string line;
  std::vector<GeneratedElement> loaded;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    try {
      loaded.push_back(generated_element_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      std::cerr << "worldgen: skipping unreadable generated element: " << e.what() << '\n';
    }
  }
  std::unique_lock lock(generated_mutex_);
  for (auto& e : loaded) generated_.push_back(std::move(e));
  std::vector<LocationCard> locs = base_->locations();
  std::vector<CharacterCard> chars = base_->characters();
  std::vector<ObjectCard> objs = base_->objects();
  for (const auto& e : generated_) {
    switch (e.kind) {
      case ElementKind::location: locs.push_back(e.to_location_card()); break;
      case ElementKind::character: chars.push_back(e.to_character_card()); break;
      case ElementKind::object: objs.push_back(e.to_object_card()); break;
    }
  }
  merged_ = std::make_shared<const Corpus>(std::move(locs), std::move(chars), std::move(objs),
                                           base_->splits());
}

void WorldService::load_sessions() {
  const fs::path dir = config_.data_dir / "sessions";
  std::vector<fs::path> logs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".jsonl") logs.push_back(entry.path());
  }
  std::sort(logs.begin(), logs.end());
  for (const auto& path : logs) {
    auto session = std::make_shared<Session>();
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      try {
        session->log.push_back(json::parse(line));
      } catch (const json::exception&) {
        std::cerr << "worldgen: ignoring torn record in " << path << '\n';
        break;
      }
    }
    if (session->log.empty()) continue;

    SessionState& st = session->state;
    std::size_t start = 0;
    const fs::path snap = path.parent_path() / (path.stem().string() + ".snapshot.json");
    if (fs::exists(snap)) {
      try {
        std::ifstream sin(snap);
        const json j = json::parse(sin);
        const auto n = j.at("event_count").get<std::size_t>();
        if (n <= session->log.size()) {
          apply(st, j.at("effective").at(0));
          st.effective = j.at("effective").get<std::vector<json>>();
          rebuild(st);
          st.event_count = n;
          st.updated_at = j.at("updated_at").get<std::string>();
          start = n;
        }
      } catch (const std::exception& e) {
        std::cerr << "worldgen: ignoring snapshot " << snap << ": " << e.what() << '\n';
        st = SessionState{};
        start = 0;
      }
    }
    for (std::size_t i = start; i < session->log.size(); ++i) apply(st, session->log[i]);
    std::unique_lock lock(sessions_mutex_);
    sessions_[st.id] = session;
  }
}

void WorldService::flush() {
  for (const auto& id : session_ids()) {
    auto s = find(id);
    std::lock_guard lock(s->mu);
    write_snapshot(*s);
  }
}

// ---------------------------------------------------------------------------
// Sessions

json WorldService::state_json(const SessionState& s) const {
  const auto corpus = merged();
  json cells = json::array();
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const Cell& c = s.grid.cell(i);
    json cj = {{"index", i}, {"x", s.grid.x_of(i)}, {"y", s.grid.y_of(i)}};
    cj["state"] = c.state == CellState::filled ? "filled"
                  : c.state == CellState::blocked ? "blocked"
                                                  : "empty";
    if (c.content) {
      const auto& p = *c.content;
      const LocationCard* loc = corpus->location_by_id(p.location_id);
      cj["location"] = {{"id", p.location_id},
                        {"name", loc ? loc->name : p.location_id},
                        {"category", loc ? loc->category : ""},
                        {"filler", p.is_filler},
                        {"generated", loc && loc->generated}};
      json chars = json::array();
      for (const auto& id : p.characters) {
        const CharacterCard* ch = corpus->character_by_id(id);
        chars.push_back({{"id", id}, {"name", ch ? ch->name : id}});
      }
      cj["characters"] = chars;
      json objs = json::array();
      for (const auto& o : p.objects) {
        const ObjectCard* ob = corpus->object_by_id(o.id);
        json inner = json::array();
        for (const auto& id : o.contained) {
          const ObjectCard* in = corpus->object_by_id(id);
          inner.push_back({{"id", id}, {"name", in ? in->name : id}});
        }
        objs.push_back({{"id", o.id},
                        {"name", ob ? ob->name : o.id},
                        {"container", ob && ob->is_container()},
                        {"contained", inner}});
      }
      cj["objects"] = objs;
    }
    cells.push_back(cj);
  }
  json exits = json::array();
  for (const auto& [a, b] : s.grid.exits()) exits.push_back({a, b});
  return {{"id", s.id},
          {"width", s.width},
          {"height", s.height},
          {"seed", s.seed},
          {"center", s.grid.center()},
          {"suggestions_enabled", s.suggestions_enabled && config_.suggestions_enabled},
          {"created_at", s.created_at},
          {"updated_at", s.updated_at},
          {"event_count", s.event_count},
          {"can_undo", s.effective.size() > 1},
          {"cells", cells},
          {"exits", exits}};
}

json WorldService::create_session(const json& request) {
  const json req = request.is_null() ? json::object() : request;
  if (!req.is_object()) throw bad_request("invalid_request", "request body must be an object");
  const int width = field_or<int>(req, "width", 3);
  const int height = field_or<int>(req, "height", 3);
  if (width < 1 || height < 1 || width > config_.max_grid_side || height > config_.max_grid_side) {
    throw bad_request("invalid_dims", "grid dims must be between 1 and " +
                                          std::to_string(config_.max_grid_side));
  }
  std::uint64_t seed;
  if (req.contains("seed") && !req.at("seed").is_null()) {
    seed = field<std::uint64_t>(req, "seed");
  } else {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  }
  const bool suggestions = field_or<bool>(req, "suggestions_enabled", true);

  const auto regular = base_->regular_locations();
  Stream rng(seed);
  const LocationCard* center = regular[rng.below(regular.size())];

  auto session = std::make_shared<Session>();
  const json ev = {{"type", "create"},     {"id", random_token()},
                   {"width", width},       {"height", height},
                   {"seed", seed},         {"suggestions_enabled", suggestions},
                   {"center", center->id}, {"at", utc_now()}};
  apply(session->state, ev);
  append_log(*session, ev);
  session->log.push_back(ev);

  std::unique_lock lock(sessions_mutex_);
  sessions_[session->state.id] = session;
  return state_json(session->state);
}

json WorldService::get_session(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return state_json(s->state);
}

json WorldService::session_at(const std::string& id, std::size_t events) const {
  auto s = find(id);
  std::vector<json> prefix;
  {
    std::lock_guard lock(s->mu);
    if (events < 1 || events > s->log.size()) {
      throw bad_request("invalid_event_count",
                        "event count must be in [1, " + std::to_string(s->log.size()) + "]");
    }
    prefix.assign(s->log.begin(), s->log.begin() + static_cast<std::ptrdiff_t>(events));
  }
  SessionState st;
  for (const auto& ev : prefix) apply(st, ev);
  return state_json(st);
}

json WorldService::mutate(const std::string& id, json event) {
  auto s = find(id);
  event["at"] = utc_now();
  std::lock_guard lock(s->mu);
  SessionState next = s->state;
  apply(next, event);
  append_log(*s, event);
  s->log.push_back(event);
  s->state = std::move(next);
  if (s->state.event_count % config_.snapshot_every == 0) write_snapshot(*s);
  return state_json(s->state);
}

namespace {

std::string resolve_id(const Corpus& corpus, const std::string& kind, const std::string& name) {
  if (kind == "location") {
    if (const auto* c = corpus.find_location(name)) return c->id;
  } else if (kind == "character") {
    if (const auto* c = corpus.find_character(name)) return c->id;
  } else if (kind == "object" || kind == "contained") {
    if (const auto* c = corpus.find_object(name)) return c->id;
  } else {
    throw bad_request("invalid_kind", "unknown kind: " + kind);
  }
  throw ServiceError(404, "unknown_element", "no " + kind + " named '" + name + "'");
}

}  // namespace

json WorldService::place(const std::string& id, const json& req) {
  const auto corpus = merged();
  const std::string kind = field_or<std::string>(req, "kind", "location");
  json ev = {{"type", "place"},
             {"kind", kind},
             {"cell", field<std::size_t>(req, "cell")},
             {"id", resolve_id(*corpus, kind, field<std::string>(req, "name"))}};
  if (kind == "contained") ev["container"] = resolve_id(*corpus, "object", field<std::string>(req, "container"));
  if (kind == "location" && req.contains("exits") && !req.at("exits").is_null()) {
    ev["exits"] = field<std::vector<std::size_t>>(req, "exits");
  }
  return mutate(id, std::move(ev));
}

json WorldService::remove(const std::string& id, const json& req) {
  const auto corpus = merged();
  const std::string kind = field_or<std::string>(req, "kind", "location");
  json ev = {{"type", "remove"}, {"kind", kind}, {"cell", field<std::size_t>(req, "cell")}};
  if (kind != "location") ev["id"] = resolve_id(*corpus, kind, field<std::string>(req, "name"));
  if (kind == "contained") ev["container"] = resolve_id(*corpus, "object", field<std::string>(req, "container"));
  return mutate(id, std::move(ev));
}

json WorldService::set_exit(const std::string& id, const json& req) {
  return mutate(id, {{"type", "exit"},
                     {"a", field<std::size_t>(req, "a")},
                     {"b", field<std::size_t>(req, "b")},
                     {"open", field_or<bool>(req, "open", true)}});
}

json WorldService::undo(const std::string& id) { return mutate(id, {{"type", "undo"}}); }

// ---------------------------------------------------------------------------
// Suggestions and search

const Scorer& WorldService::scorer_for(SuggestKind kind) const {
  switch (kind) {
    case SuggestKind::location: return *scorers_.location;
    case SuggestKind::character: return *scorers_.character;
    case SuggestKind::object: return *scorers_.object;
    case SuggestKind::contained: return *scorers_.container;
  }
  return *scorers_.location;
}

ScorerInput WorldService::suggestion_input(const std::string& id, std::size_t cell, SuggestKind kind,
                                           const std::string& container) const {
  const SessionState st = state(id);
  const auto corpus = merged();
  const WorldGrid& g = st.grid;
  const FeatureMode mode = config_.feature_mode;
  check_cell(g, cell);

  auto location_text = [&](std::size_t c) {
    const LocationCard* l = corpus->location_by_id(g.cell(c).content->location_id);
    return l ? encode_text(l->name, l->description, mode) : std::string();
  };

  ScorerInput in;
  switch (kind) {
    case SuggestKind::location: {
      if (g.cell(cell).state != CellState::empty) {
        throw bad_request("invalid_cell", "location suggestions need an empty cell");
      }
      std::vector<std::size_t> filled;
      for (auto n : g.neighbors(cell)) {
        if (g.cell(n).state == CellState::filled) filled.push_back(n);
      }
      if (filled.empty()) {
        throw bad_request("invalid_cell", "cell is not adjacent to a filled cell");
      }
      std::sort(filled.begin(), filled.end());
      std::vector<std::string> parts;
      for (auto n : filled) parts.push_back(location_text(n));
      in.context_text = join(parts, " ");
      in.task = Task::location;
      std::set<std::string> placed;
      for (auto c : g.filled_cells()) placed.insert(g.cell(c).content->location_id);
      for (const auto* l : corpus->regular_locations()) {
        if (placed.count(l->id)) continue;
        in.candidates.push_back({l->name, encode_text(l->name, l->description, mode)});
      }
      break;
    }
    case SuggestKind::character:
    case SuggestKind::object: {
      require_filled(g, cell);
      in.context_text = location_text(cell);
      if (kind == SuggestKind::character) {
        in.task = Task::character;
        in.candidates = character_candidates(*corpus, mode);
      } else {
        in.task = Task::object;
        in.candidates = object_candidates(*corpus, mode);
      }
      break;
    }
    case SuggestKind::contained: {
      require_filled(g, cell);
      const ObjectCard* host = corpus->find_object(container);
      if (!host || !find_placed_object(*g.cell(cell).content, host->id)) {
        throw conflict("container_not_placed", "container object is not in this cell");
      }
      if (!host->is_container()) throw conflict("not_a_container", "object lacks the container affordance");
      in.context_text = host->name;
      in.task = Task::container;
      for (const auto& o : corpus->objects()) {
        if (o.id != host->id) in.candidates.push_back({o.name, o.name});
      }
      break;
    }
  }
  in.nonce = derive_seed(st.seed, fnv1a(in.context_text));
  return in;
}

std::vector<Suggestion> WorldService::suggest(const std::string& id, std::size_t cell,
                                              SuggestKind kind, const std::string& container,
                                              std::optional<std::size_t> k) const {
  {
    auto s = find(id);
    std::lock_guard lock(s->mu);
    if (!config_.suggestions_enabled || !s->state.suggestions_enabled) return {};
  }
  const ScorerInput in = suggestion_input(id, cell, kind, container);
  if (in.candidates.empty()) return {};
  const auto scores = scorer_for(kind).score(in);
  const auto order = rank_scores(scores);
  const std::size_t limit = std::min(k.value_or(config_.default_k), order.size());
  std::vector<Suggestion> out;
  for (std::size_t r = 0; r < limit; ++r) {
    out.push_back({in.candidates[order[r]].name, scores[order[r]], r, std::string(to_string(kind))});
  }
  return out;
}

std::vector<SearchResult> WorldService::search(const std::string& query, const std::string& kind,
                                               std::size_t limit) const {
  const std::string q = fold_name(query);
  if (q.empty() || limit == 0) return {};
  if (!kind.empty() && kind != "location" && kind != "character" && kind != "object") {
    throw bad_request("invalid_kind", "unknown kind: " + kind);
  }
  const auto corpus = merged();

  struct Hit {
    std::string key;
    SearchResult result;
  };
  std::vector<Hit> prefix, substring;
  std::set<std::pair<std::string, std::string>> seen;
  auto consider = [&](const std::string& name, const char* k, bool generated, bool filler) {
    if (!kind.empty() && kind != k) return;
    const std::string f = fold_name(name);
    if (!seen.insert({k, f}).second) return;
    if (f.starts_with(q)) {
      prefix.push_back({f, {name, k, generated, filler}});
    } else if (f.find(q) != std::string::npos) {
      substring.push_back({f, {name, k, generated, filler}});
    }
  };
  for (const auto& l : corpus->locations()) consider(l.name, "location", l.generated, l.is_filler);
  for (const auto& c : corpus->characters()) consider(c.name, "character", c.generated, false);
  for (const auto& o : corpus->objects()) consider(o.name, "object", o.generated, false);

  auto by_key = [](const Hit& a, const Hit& b) {
    return std::tie(a.key, a.result.kind) < std::tie(b.key, b.result.kind);
  };
  std::sort(prefix.begin(), prefix.end(), by_key);
  std::sort(substring.begin(), substring.end(), by_key);
  std::vector<SearchResult> out;
  for (const auto* list : {&prefix, &substring}) {
    for (const auto& h : *list) {
      if (out.size() >= limit) return out;
      out.push_back(h.result);
    }
  }
  return out;
}

json WorldService::generate_element(const json& req) {
  const std::string name = trim(field_or<std::string>(req, "name", ""));
  if (name.empty()) throw bad_request("empty_name", "element name is empty");
  ElementKind kind;
  try {
    kind = parse_element_kind(field<std::string>(req, "kind"));
  } catch (const std::invalid_argument& e) {
    throw bad_request("invalid_kind", e.what());
  }
  const std::uint64_t seed = field_or<std::uint64_t>(req, "seed", 0);
  if (!generator_) throw ServiceError(503, "generator_unavailable", "no generator configured");

  GeneratedElement element;
  try {
    element = generator_->generate(name, kind, seed);
  } catch (const std::invalid_argument& e) {
    throw ServiceError(422, "generation_failed", e.what());
  }

  std::unique_lock lock(generated_mutex_);
  const Corpus& corpus = *merged_;
  const bool exists = (kind == ElementKind::location && corpus.find_location(name)) ||
                      (kind == ElementKind::character && corpus.find_character(name)) ||
                      (kind == ElementKind::object && corpus.find_object(name));
  if (exists) throw conflict("element_exists", "'" + name + "' is already in the corpus");

  std::vector<LocationCard> locs = corpus.locations();
  std::vector<CharacterCard> chars = corpus.characters();
  std::vector<ObjectCard> objs = corpus.objects();
  switch (kind) {
    case ElementKind::location: locs.push_back(element.to_location_card()); break;
    case ElementKind::character: chars.push_back(element.to_character_card()); break;
    case ElementKind::object: objs.push_back(element.to_object_card()); break;
  }
  auto next = std::make_shared<const Corpus>(std::move(locs), std::move(chars), std::move(objs),
                                             base_->splits());
  const json j = to_json(element);
  if (!config_.data_dir.empty()) {
    std::ofstream out(config_.data_dir / "generated.jsonl", std::ios::app | std::ios::binary);
    out << j.dump() << '\n';
    out.flush();
    if (!out) throw ServiceError(500, "storage_error", "could not persist generated element");
  }
  merged_ = std::move(next);
  generated_.push_back(std::move(element));
  return j;
}

// ---------------------------------------------------------------------------
// Export and stats

GameWorld WorldService::to_world(const SessionState& s) const {
  GameWorld w;
  w.grid = s.grid;
  w.config.grid_width = s.width;
  w.config.grid_height = s.height;
  w.config.max_locations = static_cast<std::size_t>(s.width) * s.height;
  w.config.blocked_fraction = 0.0;
  w.config.seed = s.seed;
  w.config.feature_mode = config_.feature_mode;
  w.config.timestamp = s.created_at;
  w.created_at = s.created_at;
  w.provenance.corpus_hash = hex64(corpus_hash(*base_));
  w.provenance.scorers = {{"location", scorers_.location->name()},
                          {"character", scorers_.character->name()},
                          {"object", scorers_.object->name()},
                          {"container", scorers_.container->name()}};
  w.placement_order = s.grid.filled_cells();

  std::set<std::string> ids;
  for (auto c : s.grid.filled_cells()) {
    const auto& p = *s.grid.cell(c).content;
    ids.insert(p.location_id);
    ids.insert(p.characters.begin(), p.characters.end());
    for (const auto& o : p.objects) {
      ids.insert(o.id);
      ids.insert(o.contained.begin(), o.contained.end());
    }
  }
  std::shared_lock lock(generated_mutex_);
  for (const auto& e : generated_) {
    if (ids.count(e.id())) w.generated_elements.push_back(to_json(e));
  }
  return w;
}

json WorldService::export_world(const std::string& id) const {
  const SessionState st = state(id);
  const GameWorld w = to_world(st);
  const auto corpus = merged();
  const ValidationReport report = validate_world(w, corpus.get());
  if (report.errors() > 0) {
    throw ServiceError(422, "invalid_world", "the world fails validation",
                       {{"issues", to_json(report)}});
  }
  return to_json(w);
}

json WorldService::corpus_stats() const {
  json splits = json::object();
  for (const auto& [task, ts] : base_->splits()) {
    json t = json::object();
    for (const auto& [split, ids] : ts) t[std::string(to_string(split))] = ids.size();
    splits[std::string(to_string(task))] = t;
  }
  std::size_t gl = 0, gc = 0, go = 0;
  {
    std::shared_lock lock(generated_mutex_);
    for (const auto& e : generated_) {
      gl += e.kind == ElementKind::location;
      gc += e.kind == ElementKind::character;
      go += e.kind == ElementKind::object;
    }
  }
  return {{"locations", base_->regular_locations().size()},
          {"filler_locations", base_->filler_locations().size()},
          {"characters", base_->characters().size()},
          {"objects", base_->objects().size()},
          {"generated", {{"location", gl}, {"character", gc}, {"object", go}}},
          {"splits", splits},
          {"corpus_hash", hex64(corpus_hash(*base_))}};
}

}  // namespace worldgen
