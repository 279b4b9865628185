// Copyright 2026 The secrel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SECREL_SERVICE_H_
#define SECREL_SERVICE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "json.hpp"
#include "secrel/bootstrap.h"
#include "secrel/oracle.h"

namespace httplib {
class Server;
}

namespace secrel {

// Latest snapshot of every relation's run, shared between the engine thread
// and HTTP handlers.
class RunMonitor {
 public:
  void update(const BootstrapState &state);
  void set_current(const std::string &relation);
  void set_finished();

  // {"running", "current", "relations": {name: summary}}. A summary holds
  // the iteration, known-set sizes and the last cycle's candidates.
  nlohmann::json snapshot() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, nlohmann::json> summaries_;
  std::string current_;
  bool running_ = true;
};

nlohmann::json state_summary(const BootstrapState &state);

// Raised when the bind address cannot be used.
class BindError : public Error {
 public:
  using Error::Error;
};

// host:port, both required. Throws Error on malformed input.
std::pair<std::string, int> parse_bind_address(const std::string &address);

// HTTP front end for the oracle queue and the run monitor:
//   GET  /api/queries/pending
//   POST /api/queries/{id}/answer   {"answer": "yes" | "no" | "dont_know"}
//   GET  /api/state
//   GET  /ui/...                    static review-UI assets
class Service {
 public:
  // ui_dir may be empty or missing; /ui then serves a placeholder page.
  Service(OracleQueue &queue, RunMonitor &monitor, std::filesystem::path ui_dir = {});
  ~Service();

  Service(const Service &) = delete;
  Service &operator=(const Service &) = delete;

  // Binds and starts serving on a background thread. Port 0 picks a free
  // port. Returns the bound port; throws BindError.
  int start(const std::string &host, int port);
  void stop();

 private:
  void install_routes();

  OracleQueue &queue_;
  RunMonitor &monitor_;
  std::filesystem::path ui_dir_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace secrel

#endif  // SECREL_SERVICE_H_
