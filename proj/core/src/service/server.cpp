// Copyright 2026 The smes-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "smes/service/server.hpp"

#include <httplib.h>

#include "smes/error.hpp"

namespace smes::service {
namespace {

void reply_error(httplib::Response& res, const std::string& kind, const std::string& message) {
  res.status = status_for(kind);
  res.set_content(nlohmann::json{{"error", {{"kind", kind}, {"message", message}}}}.dump(), "application/json");
}

template <typename F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    reply_error(res, e.kind(), e.what());
  } catch (const nlohmann::json::exception& e) {
    reply_error(res, "invalid_request", e.what());
  } catch (const std::exception& e) {
    reply_error(res, "internal_error", e.what());
  }
}

nlohmann::json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nullptr;
  try {
    return nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid_request", std::string("body is not JSON: ") + e.what());
  }
}

}  // namespace

int status_for(const std::string& kind) {
  if (kind == "unknown_session") return 404;
  if (kind == "internal_error" || kind == "cue_backend_failure" || kind == "no_model_loaded" ||
      kind == "bad_logits" || kind.rfind("generator_", 0) == 0) {
    return 500;
  }
  return 400;
}

struct ApiServer::Impl {
  explicit Impl(SessionManager& m) : sessions(m) {}
  SessionManager& sessions;
  httplib::Server server;
};

ApiServer::ApiServer(SessionManager& sessions) : impl_(std::make_unique<Impl>(sessions)) {
  auto& s = impl_->server;
  SessionManager& mgr = impl_->sessions;

  s.Get("/healthz", [&mgr](const httplib::Request&, httplib::Response& res) {
    res.set_content(nlohmann::json{{"model_loaded", mgr.has_generator()}, {"status", "ok"}}.dump(),
                    "application/json");
  });
  s.Post("/sessions", [&mgr](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto id = mgr.create_session(session_config_from_json(parse_body(req)));
      res.status = 201;
      res.set_content(nlohmann::json{{"id", id}}.dump(), "application/json");
    });
  });
  s.Post(R"(/sessions/([^/]+)/turns)", [&mgr](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = parse_body(req);
      if (body.is_null()) throw Error("invalid_request", "missing turn request body");
      const auto out = mgr.post_turn(req.matches[1], turn_request_from_json(body));
      res.set_content(reasoning::to_json(out).dump(), "application/json");
    });
  });
  s.Get(R"(/sessions/([^/]+)/history)", [&mgr](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string id = req.matches[1];
      res.set_content(nlohmann::json{{"entries", to_json(mgr.history(id))}, {"id", id}}.dump(), "application/json");
    });
  });
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ApiServer::serve() { return impl_->server.listen_after_bind(); }

void ApiServer::stop() { impl_->server.stop(); }

}  // namespace smes::service
