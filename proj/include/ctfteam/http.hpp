#pragma once

// HTTP+JSON binding of SessionService onto a cpp-httplib server.

#include <string>

#include "httplib.h"

#include "ctfteam/service.hpp"

namespace ctfteam {

inline json openapi_document() {
  auto pair_body = json{{"type", "object"},
                        {"required", {"i", "j"}},
                        {"properties", {{"i", {{"type", "integer"}}}, {"j", {{"type", "integer"}}}}}};
  auto error = json{{"description", "error"},
                    {"content", {{"application/json", {{"schema", {{"$ref", "#/components/schemas/Error"}}}}}}}};
  auto ok = [](const char* what) {
    return json{{"description", what}, {"content", {{"application/json", {{"schema", {{"type", "object"}}}}}}}};
  };
  auto id_param = json::array({{{"name", "id"}, {"in", "path"}, {"required", true}, {"schema", {{"type", "string"}}}}});
  auto pair_request = json{{"required", true}, {"content", {{"application/json", {{"schema", pair_body}}}}}};

  json paths;
  paths["/sessions"]["post"] = {
      {"summary", "Solve a score matrix and open a session"},
      {"requestBody",
       {{"required", true},
        {"content",
         {{"application/json",
           {{"schema",
             {{"type", "object"},
              {"properties",
               {{"csv", {{"type", "string"}}},
                {"scores", {{"type", "object"}}},
                {"config", {{"type", "object"}}}}}}}}}}}}},
      {"responses", {{"201", ok("session opened with the INITIAL solution")}, {"400", error}, {"422", error}}}};
  paths["/sessions/{id}"]["get"] = {{"summary", "Current state of a session"},
                                    {"parameters", id_param},
                                    {"responses", {{"200", ok("session view")}, {"404", error}}}};
  paths["/sessions/{id}/whatif"]["post"] = {
      {"summary", "Preview the team scores after swapping two teammates' roles"},
      {"parameters", id_param},
      {"requestBody", pair_request},
      {"responses", {{"200", ok("preview")}, {"400", error}, {"404", error}, {"409", error}}}};
  paths["/sessions/{id}/swaps"]["post"] = {
      {"summary", "Commit a role swap"},
      {"parameters", id_param},
      {"requestBody", pair_request},
      {"responses", {{"200", ok("updated session view")}, {"400", error}, {"404", error}, {"409", error}}}};
  paths["/sessions/{id}/finalize"]["post"] = {
      {"summary", "Freeze the current roles as the FINAL assignment"},
      {"parameters", id_param},
      {"responses", {{"200", ok("FINAL solution document")}, {"404", error}, {"409", error}}}};

  return {{"openapi", "3.0.3"},
          {"info", {{"title", "ctfteam session API"}, {"version", "1.0.0"}}},
          {"paths", paths},
          {"components",
           {{"schemas",
             {{"Error",
               {{"type", "object"},
                {"properties",
                 {{"error", {{"type", "string"}}}, {"rule", {{"type", "integer"}, {"nullable", true}}}}}}}}}}}};
}

namespace detail {
inline void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, const ServiceError& e) {
  json body{{"error", e.what()}, {"rule", e.rule() ? json(*e.rule()) : json(nullptr)}};
  send_json(res, e.status(), body);
}

inline std::pair<int, int> read_pair(const httplib::Request& req) {
  try {
    const auto body = json::parse(req.body);
    return {body.at("i").get<int>(), body.at("j").get<int>()};
  } catch (const json::exception& e) {
    throw ServiceError(400, std::string("expected {\"i\": int, \"j\": int}: ") + e.what());
  }
}

template <typename Handler>
auto guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const ServiceError& e) {
      send_error(res, e);
    } catch (const std::exception& e) {
      send_error(res, ServiceError(500, e.what()));
    }
  };
}
}  // namespace detail

/// Registers every endpoint on `server`. CORS headers allow `cors_origin`.
inline void mount_routes(httplib::Server& server, SessionService& service, const std::string& cors_origin = "*") {
  server.set_default_headers({{"Access-Control-Allow-Origin", cors_origin},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});

  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Get("/spec", [](const httplib::Request&, httplib::Response& res) {
    detail::send_json(res, 200, openapi_document());
  });

  server.Post("/sessions", detail::guarded([&service](const httplib::Request& req, httplib::Response& res) {
    json payload;
    try {
      payload = json::parse(req.body);
    } catch (const json::parse_error& e) {
      throw ServiceError(400, std::string("malformed JSON: ") + e.what());
    }
    detail::send_json(res, 201, service.create(payload));
  }));

  server.Get(R"(/sessions/([0-9A-Za-z]+))",
             detail::guarded([&service](const httplib::Request& req, httplib::Response& res) {
               detail::send_json(res, 200, service.get(req.matches[1]));
             }));

  server.Post(R"(/sessions/([0-9A-Za-z]+)/whatif)",
              detail::guarded([&service](const httplib::Request& req, httplib::Response& res) {
                const auto [i, j] = detail::read_pair(req);
                detail::send_json(res, 200, service.whatif(req.matches[1], i, j));
              }));

  server.Post(R"(/sessions/([0-9A-Za-z]+)/swaps)",
              detail::guarded([&service](const httplib::Request& req, httplib::Response& res) {
                const auto [i, j] = detail::read_pair(req);
                detail::send_json(res, 200, service.swap(req.matches[1], i, j));
              }));

  server.Post(R"(/sessions/([0-9A-Za-z]+)/finalize)",
              detail::guarded([&service](const httplib::Request& req, httplib::Response& res) {
                detail::send_json(res, 200, service.finalize(req.matches[1]));
              }));
}

}  // namespace ctfteam
