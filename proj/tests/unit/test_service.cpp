#include <doctest.h>

#include <httplib.h>

#include <fstream>
#include <set>
#include <thread>

#include "support.hpp"
#include "worldgen/service.hpp"

using namespace worldgen;
using nlohmann::json;
using testing::OracleScorer;
using testing::TempDir;

namespace {

std::shared_ptr<const Corpus> corpus_ptr() {
  static const auto c = std::make_shared<const Corpus>(testing::sample_corpus());
  return c;
}

ScorerSet ir_scorers() {
  static const ScorerSet set = [] {
    auto ir = std::make_shared<IRScorer>(Vocabulary::fit(corpus_documents(*corpus_ptr())));
    ir->prepare(scoring_texts(*corpus_ptr(), FeatureMode::name_and_description));
    return ScorerSet::uniform(ir);
  }();
  return set;
}

std::shared_ptr<const ElementGenerator> generator() {
  static const auto g = std::make_shared<const MarkovGenerator>(*corpus_ptr());
  return g;
}

std::unique_ptr<WorldService> make_service(ServiceConfig cfg = {}, ScorerSet set = ir_scorers()) {
  return std::make_unique<WorldService>(corpus_ptr(), set, generator(), cfg);
}

template <class F>
std::string error_code(F&& f, int* status = nullptr) {
  try {
    f();
  } catch (const ServiceError& e) {
    if (status) *status = e.status();
    return e.code();
  }
  return "";
}

std::string center_name(const json& session) {
  return session.at("cells").at(session.at("center").get<std::size_t>()).at("location").at("name");
}

// A 3x3 session whose center holds Town of Anoria.
std::string anoria_session(WorldService& svc, std::uint64_t seed = 1) {
  const json s = svc.create_session({{"seed", seed}});
  const std::string id = s.at("id");
  svc.remove(id, {{"cell", 4}});
  svc.place(id, {{"cell", 4}, {"name", "Town of Anoria"}});
  return id;
}

}  // namespace

TEST_CASE("create_session defaults and validation") {
  auto svc = make_service();
  const json s = svc->create_session({{"seed", 5}});
  CHECK(s.at("width") == 3);
  CHECK(s.at("height") == 3);
  CHECK(s.at("center") == 4);
  CHECK(s.at("event_count") == 1);
  CHECK(s.at("cells").at(4).at("state") == "filled");
  CHECK(s.at("suggestions_enabled") == true);
  CHECK(s.at("id").get<std::string>().size() == 32);
  // The center is a seeded draw over regular locations.
  CHECK(center_name(svc->create_session({{"seed", 5}})) == center_name(s));

  int status = 0;
  CHECK(error_code([&] { svc->create_session({{"width", 0}}); }, &status) == "invalid_dims");
  CHECK(status == 400);
  CHECK(error_code([&] { svc->create_session({{"height", 65}}); }) == "invalid_dims");
  CHECK(error_code([&] { svc->get_session("nope"); }, &status) == "unknown_session");
  CHECK(status == 404);
}

TEST_CASE("placing locations links adjacent filled cells") {
  auto svc = make_service();
  const std::string id = anoria_session(*svc);
  const json after = svc->place(id, {{"cell", 1}, {"name", "Mountain's Peak"}});
  CHECK(after.at("exits") == json::array({json::array({1, 4})}));
  svc->place(id, {{"cell", 0}, {"name", "Town Square"}, {"exits", {1}}});
  const SessionState st = svc->state(id);
  CHECK(st.grid.has_exit(0, 1));
  CHECK_FALSE(st.grid.has_exit(0, 3));
  CHECK(error_code([&] { svc->place(id, {{"cell", 2}, {"name", "Town Gate"}, {"exits", {4}}}); }) ==
        "invalid_exit");
  CHECK(error_code([&] { svc->place(id, {{"cell", 2}, {"name", "Town Gate"}, {"exits", {5}}}); }) ==
        "exit_to_unfilled");
  CHECK(error_code([&] { svc->place(id, {{"cell", 1}, {"name", "Town Gate"}}); }) == "cell_occupied");
  CHECK(error_code([&] { svc->place(id, {{"cell", 99}, {"name", "Town Gate"}}); }) == "invalid_cell");
  int status = 0;
  CHECK(error_code([&] { svc->place(id, {{"cell", 2}, {"name", "Atlantis"}}); }, &status) ==
        "unknown_element");
  CHECK(status == 404);
  CHECK(error_code([&] { svc->place(id, {{"name", "Town Gate"}}); }) != "");
}

TEST_CASE("duplicate regular locations are rejected, fillers are not") {
  auto svc = make_service();
  const std::string id = anoria_session(*svc);
  int status = 0;
  CHECK(error_code([&] { svc->place(id, {{"cell", 1}, {"name", "town of anoria"}}); }, &status) ==
        "duplicate_location");
  CHECK(status == 409);
  CHECK(svc->state(id).event_count == 3);  // the rejected edit is not logged
  svc->place(id, {{"cell", 1}, {"name", "empty closet"}});
  svc->place(id, {{"cell", 7}, {"name", "Empty Closet"}});
  CHECK(svc->state(id).grid.filled_count() == 3);
}

TEST_CASE("characters, objects and contained objects") {
  auto svc = make_service();
  const std::string id = anoria_session(*svc);
  svc->place(id, {{"cell", 4}, {"kind", "character"}, {"name", "townspeople"}});
  CHECK(error_code([&] { svc->place(id, {{"cell", 4}, {"kind", "character"}, {"name", "townspeople"}}); }) ==
        "duplicate_character");
  CHECK(error_code([&] { svc->place(id, {{"cell", 0}, {"kind", "character"}, {"name", "townspeople"}}); }) ==
        "cell_not_filled");
  svc->place(id, {{"cell", 4}, {"kind", "object"}, {"name", "pouch"}});
  svc->place(id, {{"cell", 4}, {"kind", "object"}, {"name", "candle"}});
  svc->place(id, {{"cell", 4}, {"kind", "contained"}, {"name", "coins"}, {"container", "pouch"}});
  CHECK(error_code([&] {
          svc->place(id, {{"cell", 4}, {"kind", "contained"}, {"name", "coins"}, {"container", "candle"}});
        }) == "not_a_container");
  CHECK(error_code([&] {
          svc->place(id, {{"cell", 4}, {"kind", "contained"}, {"name", "coins"}, {"container", "backpack"}});
        }) == "container_not_placed");
  CHECK(error_code([&] {
          svc->place(id, {{"cell", 4}, {"kind", "contained"}, {"name", "pouch"}, {"container", "pouch"}});
        }) == "invalid_nesting");
  CHECK(error_code([&] { svc->place(id, {{"cell", 4}, {"kind", "spell"}, {"name", "x"}}); }) ==
        "invalid_kind");

  const json s = svc->get_session(id);
  const json& cell = s.at("cells").at(4);
  CHECK(cell.at("characters").at(0).at("name") == "townspeople");
  CHECK(cell.at("objects").at(0).at("container") == true);
  CHECK(cell.at("objects").at(0).at("contained").at(0).at("name") == "coins");

  svc->remove(id, {{"cell", 4}, {"kind", "contained"}, {"name", "coins"}, {"container", "pouch"}});
  svc->remove(id, {{"cell", 4}, {"kind", "character"}, {"name", "townspeople"}});
  int status = 0;
  CHECK(error_code([&] { svc->remove(id, {{"cell", 4}, {"kind", "character"}, {"name", "townspeople"}}); },
                   &status) == "element_not_placed");
  CHECK(status == 404);
}

TEST_CASE("exits can be toggled between adjacent filled cells") {
  auto svc = make_service();
  const std::string id = anoria_session(*svc);
  svc->place(id, {{"cell", 5}, {"name", "Fishing Dock"}});
  svc->set_exit(id, {{"a", 4}, {"b", 5}, {"open", false}});
  CHECK_FALSE(svc->state(id).grid.has_exit(4, 5));
  svc->set_exit(id, {{"a", 5}, {"b", 4}});
  CHECK(svc->state(id).grid.has_exit(4, 5));
  CHECK(error_code([&] { svc->set_exit(id, {{"a", 4}, {"b", 8}}); }) == "invalid_exit");
  CHECK(error_code([&] { svc->set_exit(id, {{"a", 4}, {"b", 3}}); }) == "exit_to_unfilled");
}

TEST_CASE("undo steps back through edits") {
  auto svc = make_service();
  const json fresh = svc->create_session({{"seed", 2}});
  const std::string id = fresh.at("id");
  CHECK(error_code([&] { svc->undo(id); }) == "nothing_to_undo");
  const SessionState before = svc->state(id);
  svc->place(id, {{"cell", 1}, {"name", "empty closet"}});
  svc->place(id, {{"cell", 1}, {"kind", "character"}, {"name", "townspeople"}});
  svc->undo(id);
  svc->undo(id);
  const SessionState after = svc->state(id);
  CHECK(after.grid == before.grid);
  CHECK(after.event_count == 5);
  CHECK(svc->get_session(id).at("can_undo") == false);
}

TEST_CASE("session_at replays a prefix of the log") {
  auto svc = make_service();
  const std::string id = anoria_session(*svc);
  svc->place(id, {{"cell", 1}, {"name", "Fishing Dock"}});
  const json first = svc->session_at(id, 1);
  CHECK(first.at("event_count") == 1);
  CHECK(first.at("cells").at(1).at("state") == "empty");
  const json two = svc->session_at(id, 2);
  CHECK(two.at("cells").at(4).at("state") == "empty");
  CHECK(svc->session_at(id, 4) == svc->get_session(id));
  CHECK(error_code([&] { svc->session_at(id, 0); }) != "");
  CHECK(error_code([&] { svc->session_at(id, 5); }) != "");
}

TEST_CASE("oracle-ranked suggestions follow the card fixtures") {
  ScorerSet set = ir_scorers();
  set.location = std::make_shared<OracleScorer>(std::vector<std::string>{"Mountain's Peak"});
  set.character = std::make_shared<OracleScorer>(
      std::vector<std::string>{"townspeople", "mysterious merchant"});
  auto svc = make_service({}, set);
  const std::string id = anoria_session(*svc);
  const auto loc = svc->suggest(id, 1, SuggestKind::location);
  REQUIRE_FALSE(loc.empty());
  CHECK(loc[0].name == "Mountain's Peak");
  CHECK(loc[0].rank == 0);
  CHECK(loc.size() == 10);
  const auto ch = svc->suggest(id, 4, SuggestKind::character, {}, 2);
  REQUIRE(ch.size() == 2);
  CHECK(ch[0].name == "townspeople");
  CHECK(ch[1].name == "mysterious merchant");
  CHECK(error_code([&] { svc->suggest(id, 4, SuggestKind::location); }) == "invalid_cell");
  CHECK(error_code([&] { svc->suggest(id, 0, SuggestKind::location); }) == "invalid_cell");
}

TEST_CASE("placed locations drop out of location suggestions") {
  auto svc = make_service();
  const std::string id = anoria_session(*svc);
  const auto first = svc->suggest(id, 1, SuggestKind::location, {}, 1000);
  svc->place(id, {{"cell", 1}, {"name", first[0].name}});
  for (const auto& s : svc->suggest(id, 5, SuggestKind::location, {}, 1000)) {
    CHECK(s.name != first[0].name);
    CHECK(s.name != "Town of Anoria");
  }
  CHECK(svc->suggest(id, 5, SuggestKind::location, {}, 1000).size() ==
        corpus_ptr()->regular_locations().size() - 2);
}

TEST_CASE("container suggestions rank other objects for a placed container") {
  ScorerSet set = ir_scorers();
  set.container = std::make_shared<OracleScorer>(std::vector<std::string>{"coins", "eyeglasses"});
  auto svc = make_service({}, set);
  const std::string id = anoria_session(*svc);
  svc->place(id, {{"cell", 4}, {"kind", "object"}, {"name", "pouch"}});
  const auto s = svc->suggest(id, 4, SuggestKind::contained, "pouch", 2);
  REQUIRE(s.size() == 2);
  CHECK(s[0].name == "coins");
  CHECK(s[1].name == "eyeglasses");
  CHECK(error_code([&] { svc->suggest(id, 4, SuggestKind::contained, "backpack"); }) ==
        "container_not_placed");
}

TEST_CASE("suggestions can be disabled per session or globally") {
  auto svc = make_service();
  const json s = svc->create_session({{"seed", 1}, {"suggestions_enabled", false}});
  CHECK(s.at("suggestions_enabled") == false);
  CHECK(svc->suggest(s.at("id"), 1, SuggestKind::location).empty());
  ServiceConfig off;
  off.suggestions_enabled = false;
  auto quiet = make_service(off);
  const json q = quiet->create_session({{"seed", 1}});
  CHECK(q.at("suggestions_enabled") == false);
  CHECK(quiet->suggest(q.at("id"), 1, SuggestKind::location).empty());
}

TEST_CASE("search lists prefix matches before substring matches") {
  auto svc = make_service();
  const auto r = svc->search("town", "location");
  REQUIRE(r.size() >= 3);
  bool in_prefix = true;
  std::string last;
  for (const auto& x : r) {
    const std::string f = fold_name(x.name);
    const bool prefix = f.starts_with("town");
    if (!prefix) in_prefix = false;
    CHECK(prefix == in_prefix);
    CHECK(x.kind == "location");
    CHECK(f.find("town") != std::string::npos);
  }
  CHECK(fold_name(r[0].name) <= fold_name(r[1].name));
  const auto closet = svc->search("closet", "");
  REQUIRE_FALSE(closet.empty());
  CHECK(closet[0].filler);
  CHECK(svc->search("", "").empty());
  CHECK(svc->search("a", "", 3).size() == 3);
  CHECK(error_code([&] { svc->search("a", "spell"); }) == "invalid_kind");
}

TEST_CASE("generated elements become searchable and placeable") {
  auto svc = make_service();
  const json e = svc->generate_element({{"name", "Moonlit Harbor"}, {"kind", "location"}, {"seed", 3}});
  CHECK(e.at("generated") == true);
  CHECK(e.at("name") == "Moonlit Harbor");
  int status = 0;
  CHECK(error_code([&] { svc->generate_element({{"name", "moonlit harbor"}, {"kind", "location"}}); },
                   &status) == "element_exists");
  CHECK(status == 409);
  CHECK(error_code([&] { svc->generate_element({{"name", "Town of Anoria"}, {"kind", "location"}}); }) ==
        "element_exists");
  CHECK(error_code([&] { svc->generate_element({{"name", ""}, {"kind", "location"}}); }) == "empty_name");
  CHECK(error_code([&] { svc->generate_element({{"name", "x"}, {"kind", "planet"}}); }) == "invalid_kind");

  const auto hits = svc->search("moonlit", "location");
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].generated);
  const std::string id = anoria_session(*svc);
  const json s = svc->place(id, {{"cell", 1}, {"name", "Moonlit Harbor"}});
  CHECK(s.at("cells").at(1).at("location").at("generated") == true);
  const json world = svc->export_world(id);
  CHECK(world.at("generated_elements").size() == 1);
  CHECK(svc->corpus_stats().at("generated").at("location") == 1);
}

TEST_CASE("export validates the session world") {
  auto svc = make_service();
  const json s = svc->create_session({{"seed", 4}});
  const std::string id = s.at("id");
  const auto regular = corpus_ptr()->regular_locations();
  const std::string center = center_name(s);
  std::size_t next = 0;
  for (std::size_t cell : {1, 3, 5, 7, 0, 2, 6, 8}) {
    while (regular[next]->name == center) ++next;
    svc->place(id, {{"cell", cell}, {"name", regular[next++]->name}});
  }
  const json world = svc->export_world(id);
  CHECK(world.at("grid").is_object());
  CHECK(validate_world(world_from_json(world), corpus_ptr().get()).empty());

  auto svc2 = make_service();
  const std::string lonely = svc2->create_session({{"seed", 4}}).at("id");
  svc2->place(lonely, {{"cell", 0}, {"name", "empty closet"}});
  svc2->place(lonely, {{"cell", 8}, {"name", "empty closet"}});
  try {
    svc2->export_world(lonely);
    FAIL("export should fail");
  } catch (const ServiceError& e) {
    CHECK(e.status() == 422);
    CHECK(e.code() == "invalid_world");
    const json issues = e.details().at("issues");
    REQUIRE(issues.size() >= 1);
    CHECK(issues.at(0).at("code") == "unreachable");
    CHECK(e.body().at("error").at("details").at("issues") == issues);
  }
}

TEST_CASE("event log replay reproduces every session after restart") {
  TempDir dir;
  ServiceConfig cfg;
  cfg.data_dir = dir.path();
  std::string id;
  SessionState before;
  {
    auto svc = make_service(cfg);
    id = anoria_session(*svc, 9);
    svc->place(id, {{"cell", 1}, {"name", "Fishing Dock"}});
    svc->generate_element({{"name", "Glass Lantern"}, {"kind", "object"}, {"seed", 1}});
    for (int i = 0; i < 60; ++i) {
      svc->place(id, {{"cell", 1}, {"kind", "object"}, {"name", "Glass Lantern"}});
      svc->remove(id, {{"cell", 1}, {"kind", "object"}, {"name", "Glass Lantern"}});
    }
    svc->place(id, {{"cell", 4}, {"kind", "character"}, {"name", "townspeople"}});
    svc->undo(id);
    svc->place(id, {{"cell", 4}, {"kind", "object"}, {"name", "Glass Lantern"}});
    before = svc->state(id);
    CHECK(before.event_count == 127);
  }
  CHECK(std::filesystem::exists(dir.path() / "sessions" / (id + ".jsonl")));
  CHECK(std::filesystem::exists(dir.path() / "sessions" / (id + ".snapshot.json")));
  CHECK(std::filesystem::exists(dir.path() / "generated.jsonl"));

  auto restarted = make_service(cfg);
  CHECK(restarted->session_ids() == std::vector<std::string>{id});
  CHECK(restarted->state(id) == before);
  CHECK(restarted->search("glass lantern", "object").size() == 1);

  // A torn final record (crash mid-write) is ignored.
  {
    std::ofstream log(dir.path() / "sessions" / (id + ".jsonl"), std::ios::app);
    log << "{\"type\":\"place\",\"ki";
  }
  auto again = make_service(cfg);
  CHECK(again->state(id) == before);

  // Without the snapshot the full log gives the same state.
  std::filesystem::remove(dir.path() / "sessions" / (id + ".snapshot.json"));
  auto cold = make_service(cfg);
  CHECK(cold->state(id) == before);
}

TEST_CASE("concurrent edits to one session serialize") {
  auto svc = make_service();
  const std::string id = anoria_session(*svc);
  const auto& chars = corpus_ptr()->characters();
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (std::size_t i = static_cast<std::size_t>(t); i < 40; i += 4) {
        svc->place(id, {{"cell", 4}, {"kind", "character"}, {"name", chars[i].name}});
        (void)svc->suggest(id, 1, SuggestKind::location);
      }
    });
  }
  for (auto& th : threads) th.join();
  const SessionState st = svc->state(id);
  CHECK(st.grid.cell(4).content->characters.size() == 40);
  CHECK(st.event_count == 43);
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

class Server {
 public:
  explicit Server(WorldService& svc) {
    mount_api(server_, svc);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~Server() {
    server_.stop();
    thread_.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(30);
    return c;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

json body(const httplib::Result& r) { return json::parse(r->body); }

}  // namespace

TEST_CASE("HTTP API round trip") {
  auto svc = make_service();
  Server server(*svc);
  auto cli = server.client();

  auto r = cli.Post("/v1/sessions", R"({"seed": 1, "width": 3, "height": 3})", "application/json");
  REQUIRE(r);
  CHECK(r->status == 201);
  CHECK(r->get_header_value("Access-Control-Allow-Origin") == "*");
  const std::string id = body(r).at("id");
  const std::string base = "/v1/sessions/" + id;

  r = cli.Get(base);
  CHECK(r->status == 200);
  CHECK(body(r).at("id") == id);

  r = cli.Delete(base + "/cell?cell=4");
  CHECK(r->status == 200);
  r = cli.Post(base + "/place", R"({"cell": 4, "name": "Town of Anoria"})", "application/json");
  CHECK(r->status == 200);
  r = cli.Post(base + "/place", R"({"cell": 1, "name": "Town of Anoria"})", "application/json");
  CHECK(r->status == 409);
  CHECK(body(r).at("error").at("code") == "duplicate_location");
  CHECK(body(r).at("error").contains("message"));

  r = cli.Get(base + "/suggest?cell=1&kind=location&k=5");
  REQUIRE(r->status == 200);
  const json sug = body(r).at("suggestions");
  CHECK(sug.size() == 5);
  const auto direct = svc->suggest(id, 1, SuggestKind::location, {}, 5);
  for (std::size_t i = 0; i < direct.size(); ++i) CHECK(sug.at(i).at("name") == direct[i].name);

  r = cli.Get(base + "/suggest?kind=location");
  CHECK(r->status == 400);
  r = cli.Get(base + "/suggest?cell=abc");
  CHECK(r->status == 400);
  r = cli.Post(base + "/undo", "", "application/json");
  CHECK(r->status == 200);
  r = cli.Post(base + "/exits", R"({"a": 4, "b": 8})", "application/json");
  CHECK(r->status == 400);

  r = cli.Get("/v1/search?q=fish&kind=location");
  CHECK(r->status == 200);
  const json results = body(r).at("results");
  std::set<std::string> found;
  for (const auto& x : results) found.insert(x.at("name").get<std::string>());
  CHECK(found.count("Fishing Dock") == 1);

  r = cli.Post("/v1/generate-element", R"({"name": "Rusty Anchor", "kind": "object", "seed": 2})",
               "application/json");
  CHECK(r->status == 201);
  CHECK(body(r).at("generated") == true);

  r = cli.Post(base + "/export", "", "application/json");
  CHECK(r->status == 200);
  r = cli.Get("/v1/corpus/stats");
  CHECK(body(r).at("locations") == 40);

  r = cli.Get("/v1/sessions/doesnotexist");
  CHECK(r->status == 404);
  CHECK(body(r).at("error").at("code") == "unknown_session");
  r = cli.Post("/v1/sessions", "{not json", "application/json");
  CHECK(r->status == 400);
  CHECK(body(r).at("error").at("code") == "invalid_json");
  r = cli.Options("/v1/sessions");
  CHECK(r->status == 204);
}
