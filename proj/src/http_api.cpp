#include <httplib.h>

#include "worldgen/service.hpp"

namespace worldgen {

using nlohmann::json;

namespace {

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json body_of(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw ServiceError(400, "invalid_json", e.what());
  }
}

std::size_t size_param(const httplib::Request& req, const char* key) {
  const std::string v = req.get_param_value(key);
  try {
    std::size_t used = 0;
    const unsigned long long n = std::stoull(v, &used);
    if (used != v.size() || v.starts_with('-')) throw std::invalid_argument(v);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw ServiceError(400, "invalid_parameter", std::string("invalid parameter: ") + key);
  }
}

template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ServiceError& e) {
      send(res, e.status(), e.body());
    } catch (const json::exception& e) {
      send(res, 400, ServiceError(400, "invalid_request", e.what()).body());
    } catch (const std::invalid_argument& e) {
      send(res, 400, ServiceError(400, "invalid_request", e.what()).body());
    } catch (const std::exception& e) {
      send(res, 500, ServiceError(500, "internal_error", e.what()).body());
    }
  };
}

// Query parameters take precedence for DELETE, whose body some clients drop.
json delete_request(const httplib::Request& req) {
  json j = body_of(req);
  for (const char* key : {"kind", "name", "container"}) {
    if (req.has_param(key)) j[key] = req.get_param_value(key);
  }
  if (req.has_param("cell")) j["cell"] = size_param(req, "cell");
  return j;
}

}  // namespace

void mount_api(httplib::Server& server, WorldService& service) {
  const std::string session = R"(/v1/sessions/([A-Za-z0-9_-]+))";

  server.Post("/v1/sessions", guarded([&](const httplib::Request& req, httplib::Response& res) {
                send(res, 201, service.create_session(body_of(req)));
              }));

  server.Get(session, guarded([&](const httplib::Request& req, httplib::Response& res) {
               if (req.has_param("events")) {
                 send(res, 200, service.session_at(req.matches[1], size_param(req, "events")));
               } else {
                 send(res, 200, service.get_session(req.matches[1]));
               }
             }));

  server.Post(session + "/place", guarded([&](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, service.place(req.matches[1], body_of(req)));
              }));

  server.Delete(session + "/cell", guarded([&](const httplib::Request& req, httplib::Response& res) {
                  send(res, 200, service.remove(req.matches[1], delete_request(req)));
                }));

  server.Post(session + "/exits", guarded([&](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, service.set_exit(req.matches[1], body_of(req)));
              }));

  server.Post(session + "/undo", guarded([&](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, service.undo(req.matches[1]));
              }));

  server.Get(session + "/suggest", guarded([&](const httplib::Request& req, httplib::Response& res) {
               const SuggestKind kind = parse_suggest_kind(
                   req.has_param("kind") ? req.get_param_value("kind") : "location");
               if (!req.has_param("cell")) throw ServiceError(400, "missing_parameter", "cell is required");
               std::optional<std::size_t> k;
               if (req.has_param("k")) k = size_param(req, "k");
               json list = json::array();
               for (const auto& s : service.suggest(req.matches[1], size_param(req, "cell"), kind,
                                                    req.get_param_value("container"), k)) {
                 list.push_back(to_json(s));
               }
               send(res, 200, {{"suggestions", list}});
             }));

  server.Get("/v1/search", guarded([&](const httplib::Request& req, httplib::Response& res) {
               const std::size_t limit = req.has_param("limit") ? size_param(req, "limit") : 20;
               json list = json::array();
               for (const auto& r :
                    service.search(req.get_param_value("q"), req.get_param_value("kind"), limit)) {
                 list.push_back({{"name", r.name},
                                 {"kind", r.kind},
                                 {"generated", r.generated},
                                 {"filler", r.filler}});
               }
               send(res, 200, {{"results", list}});
             }));

  server.Post("/v1/generate-element", guarded([&](const httplib::Request& req, httplib::Response& res) {
                send(res, 201, service.generate_element(body_of(req)));
              }));

  server.Post(session + "/export", guarded([&](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, service.export_world(req.matches[1]));
              }));

  server.Get("/v1/corpus/stats", guarded([&](const httplib::Request&, httplib::Response& res) {
               send(res, 200, service.corpus_stats());
             }));

  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

}  // namespace worldgen
