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

#pragma once

#include <memory>
#include <string>

#include "smes/service/session.hpp"

namespace smes::service {

// HTTP front end over a SessionManager:
//   POST /sessions                    -> {"id"}
//   POST /sessions/{id}/turns         -> PipelineOutput
//   GET  /sessions/{id}/history       -> {"id", "entries": [...]}
//   GET  /healthz                     -> {"status": "ok", "model_loaded"}
// Errors answer {"error": {"kind", "message"}} with 400, 404 or 500.
class ApiServer {
 public:
  explicit ApiServer(SessionManager& sessions);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// HTTP status for an error kind.
int status_for(const std::string& kind);

}  // namespace smes::service
