#pragma once

// Interactive world-building sessions.
//
// Each session is an editable grid whose state is the fold of an append-only
// event log. Every mutation is validated against a copy of the state, logged,
// and only then committed, so it either fully applies or is rejected. With a
// data directory the logs live on disk (one JSONL file per session plus a
// periodic snapshot) and are replayed when the service starts.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "worldgen/assembly.hpp"
#include "worldgen/corpus.hpp"
#include "worldgen/generator.hpp"
#include "worldgen/ranking.hpp"

namespace httplib {
class Server;
}

namespace worldgen {

/// A rejected request. code is machine-readable; status is the HTTP status.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& message,
               nlohmann::json details = nullptr)
      : std::runtime_error(message), status_(status), code_(std::move(code)),
        details_(std::move(details)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }
  const nlohmann::json& details() const { return details_; }
  nlohmann::json body() const;

 private:
  int status_;
  std::string code_;
  nlohmann::json details_;
};

struct ServiceConfig {
  /// Empty: sessions live in memory only.
  std::filesystem::path data_dir;
  /// Global switch; sessions may also disable suggestions individually.
  bool suggestions_enabled = true;
  FeatureMode feature_mode = FeatureMode::name_and_description;
  std::size_t snapshot_every = 100;
  std::size_t default_k = 10;
  int max_grid_side = 64;
};

enum class SuggestKind { location, character, object, contained };
SuggestKind parse_suggest_kind(std::string_view s);
std::string_view to_string(SuggestKind k);

struct Suggestion {
  std::string name;
  double score = 0.0;
  std::size_t rank = 0;
  std::string kind;
};
nlohmann::json to_json(const Suggestion& s);

struct SearchResult {
  std::string name;
  std::string kind;
  bool generated = false;
  bool filler = false;
};

/// Editable state of one session; fully determined by its event log.
struct SessionState {
  std::string id;
  int width = 0;
  int height = 0;
  std::uint64_t seed = 0;
  bool suggestions_enabled = true;
  std::string created_at;
  std::string updated_at;
  std::size_t event_count = 0;
  WorldGrid grid;
  /// Create event followed by the edits currently in effect (undo pops).
  std::vector<nlohmann::json> effective;

  bool operator==(const SessionState& o) const {
    return id == o.id && width == o.width && height == o.height && seed == o.seed &&
           suggestions_enabled == o.suggestions_enabled && created_at == o.created_at &&
           updated_at == o.updated_at && event_count == o.event_count && grid == o.grid &&
           effective == o.effective;
  }
};

class WorldService {
 public:
  WorldService(std::shared_ptr<const Corpus> corpus, ScorerSet scorers,
               std::shared_ptr<const ElementGenerator> generator, ServiceConfig config = {});
  ~WorldService();

  WorldService(const WorldService&) = delete;
  WorldService& operator=(const WorldService&) = delete;

  /// Defaults: 3x3, random seed. Request keys: width, height, seed,
  /// suggestions_enabled.
  nlohmann::json create_session(const nlohmann::json& request);
  nlohmann::json get_session(const std::string& id) const;
  /// State after the first n events of the log.
  nlohmann::json session_at(const std::string& id, std::size_t events) const;

  /// Request: {cell, kind: location|character|object|contained, name,
  /// container (for contained), exits (location only; default: every
  /// adjacent filled cell)}.
  nlohmann::json place(const std::string& id, const nlohmann::json& request);
  /// Request: {cell, kind (default location), name, container}. Removing a
  /// location empties the cell and drops its exits.
  nlohmann::json remove(const std::string& id, const nlohmann::json& request);
  /// Request: {a, b, open}. Opens or closes the exit between two adjacent
  /// filled cells.
  nlohmann::json set_exit(const std::string& id, const nlohmann::json& request);
  nlohmann::json undo(const std::string& id);

  /// Empty when suggestions are disabled globally or for the session.
  std::vector<Suggestion> suggest(const std::string& id, std::size_t cell, SuggestKind kind,
                                  const std::string& container = {},
                                  std::optional<std::size_t> k = std::nullopt) const;
  /// The exact scorer input suggest() ranks.
  ScorerInput suggestion_input(const std::string& id, std::size_t cell, SuggestKind kind,
                               const std::string& container = {}) const;
  const Scorer& scorer_for(SuggestKind kind) const;

  /// Prefix matches, then substring matches, each alphabetical by folded
  /// name. kind: location, character, object or empty for all.
  std::vector<SearchResult> search(const std::string& query, const std::string& kind,
                                   std::size_t limit = 20) const;

  /// Generates a card for a name that is not in the corpus and makes it
  /// searchable and placeable in every session.
  nlohmann::json generate_element(const nlohmann::json& request);

  /// World export JSON; throws ServiceError 422 listing validation issues.
  nlohmann::json export_world(const std::string& id) const;
  nlohmann::json corpus_stats() const;

  /// Rebuilds a world from a session state (used by export and tests).
  GameWorld to_world(const SessionState& state) const;
  SessionState state(const std::string& id) const;
  std::vector<std::string> session_ids() const;

  /// Writes a snapshot for every session.
  void flush();

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;
  nlohmann::json mutate(const std::string& id, nlohmann::json event);
  void apply(SessionState& s, const nlohmann::json& event) const;
  void apply_edit(SessionState& s, const nlohmann::json& event) const;
  void rebuild(SessionState& s) const;
  void append_log(const Session& session, const nlohmann::json& event) const;
  void write_snapshot(const Session& session) const;
  void load_sessions();
  void load_generated();
  std::shared_ptr<const Corpus> merged() const;
  nlohmann::json state_json(const SessionState& s) const;

  std::shared_ptr<const Corpus> base_;
  ScorerSet scorers_;
  std::shared_ptr<const ElementGenerator> generator_;
  ServiceConfig config_;

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;

  mutable std::shared_mutex generated_mutex_;
  std::vector<GeneratedElement> generated_;
  std::shared_ptr<const Corpus> merged_;
};

/// Registers the /v1 routes on an httplib server.
void mount_api(httplib::Server& server, WorldService& service);

/// ISO-8601 UTC wall-clock time.
std::string utc_now();
/// 128 random bits as 32 lowercase hex characters.
std::string random_token();

}  // namespace worldgen
