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

#include "secrel/service.h"

#include "httplib.h"
#include "secrel/base.h"

namespace secrel {
namespace {

using nlohmann::json;

constexpr const char *kPlaceholderPage =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>secrel review</title></head>"
    "<body><p>Review UI assets are not installed. The queue is available at "
    "<a href=\"/api/queries/pending\">/api/queries/pending</a>.</p></body></html>";

void send_json(httplib::Response &res, const json &body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response &res, int status, const std::string &message) {
  send_json(res, {{"error", message}}, status);
}

json candidates_summary(const std::vector<CandidateRecord> &list) {
  json out = json::array();
  for (const CandidateRecord &c : list) {
    out.push_back({{"key", c.key},
                   {"score", c.score},
                   {"queried", c.queried},
                   {"answer", c.answer ? json(answer_name(*c.answer)) : json(nullptr)},
                   {"accepted", c.accepted}});
  }
  return out;
}

}  // namespace

json state_summary(const BootstrapState &state) {
  json last = nullptr;
  if (!state.history.empty()) {
    const IterationRecord &rec = state.history.back();
    json conflicts = json::array();
    for (const ConflictRecord &c : rec.conflicts) {
      conflicts.push_back({{"key", c.key}, {"chosen", c.chosen}, {"reason", c.reason}});
    }
    last = {{"iteration", rec.iteration},
            {"patterns", candidates_summary(rec.patterns)},
            {"relations", candidates_summary(rec.relations)},
            {"conflicts", conflicts},
            {"promotions", rec.promotions}};
  }
  json answers = json::object();
  for (const auto &[key, a] : state.answers) answers[key] = answer_name(a);
  return {{"relation", state.relation},
          {"iteration", state.iteration},
          {"known_relations", state.known_relations.size()},
          {"known_patterns", state.known_patterns.size()},
          {"promoted_mentions", state.promoted_mentions.size()},
          {"answers", answers},
          {"last_cycle", last}};
}

void RunMonitor::update(const BootstrapState &state) {
  json summary = state_summary(state);
  std::lock_guard<std::mutex> lock(mu_);
  summaries_[state.relation] = std::move(summary);
}

void RunMonitor::set_current(const std::string &relation) {
  std::lock_guard<std::mutex> lock(mu_);
  current_ = relation;
}

void RunMonitor::set_finished() {
  std::lock_guard<std::mutex> lock(mu_);
  running_ = false;
}

json RunMonitor::snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  json relations = json::object();
  for (const auto &[name, summary] : summaries_) relations[name] = summary;
  return {{"running", running_}, {"current", current_}, {"relations", relations}};
}

std::pair<std::string, int> parse_bind_address(const std::string &address) {
  std::size_t colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == address.size()) {
    throw Error("bind address must look like host:port, got '" + address + "'");
  }
  std::string host = address.substr(0, colon);
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(address.substr(colon + 1), &used);
    if (used != address.size() - colon - 1) throw Error("");
  } catch (const std::exception &) {
    throw Error("bad port in bind address '" + address + "'");
  }
  if (port < 0 || port > 65535) throw Error("port out of range in '" + address + "'");
  return {host, port};
}

Service::Service(OracleQueue &queue, RunMonitor &monitor, std::filesystem::path ui_dir)
    : queue_(queue),
      monitor_(monitor),
      ui_dir_(std::move(ui_dir)),
      server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

Service::~Service() { stop(); }

void Service::install_routes() {
  httplib::Server &svr = *server_;
  // SO_REUSEADDR only: the library default adds SO_REUSEPORT, which lets a
  // second server share a busy port instead of failing.
  svr.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void *>(&yes), sizeof(yes));
  });
  svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});

  svr.Options(R"(/api/.*)", [](const httplib::Request &, httplib::Response &res) {
    res.status = 204;
  });

  svr.Get("/api/queries/pending", [this](const httplib::Request &, httplib::Response &res) {
    json out = json::array();
    for (const OracleQuery &q : queue_.pending()) out.push_back(query_to_json(q));
    send_json(res, out);
  });

  svr.Post(R"(/api/queries/([^/]+)/answer)",
           [this](const httplib::Request &req, httplib::Response &res) {
             const std::string id = req.matches[1];
             json body = json::parse(req.body, nullptr, false);
             if (body.is_discarded() || !body.is_object() || !body.contains("answer") ||
                 !body["answer"].is_string()) {
               send_error(res, 400, "body must be {\"answer\": \"yes\"|\"no\"|\"dont_know\"}");
               return;
             }
             std::optional<Answer> answer = parse_answer(body["answer"].get<std::string>());
             if (!answer) {
               send_error(res, 400, "answer must be \"yes\", \"no\" or \"dont_know\"");
               return;
             }
             switch (queue_.answer(id, *answer)) {
               case OracleQueue::AnswerResult::kUnknownId:
                 send_error(res, 404, "no query with id '" + id + "'");
                 return;
               case OracleQueue::AnswerResult::kNotPending:
                 send_error(res, 409, "query '" + id + "' is no longer pending");
                 return;
               case OracleQueue::AnswerResult::kOk:
                 send_json(res, query_to_json(*queue_.get(id)));
                 return;
             }
           });

  svr.Get("/api/state", [this](const httplib::Request &, httplib::Response &res) {
    json out = monitor_.snapshot();
    out["pending"] = queue_.pending_count();
    send_json(res, out);
  });

  std::error_code ec;
  if (!ui_dir_.empty() && std::filesystem::is_directory(ui_dir_, ec)) {
    svr.set_mount_point("/ui", ui_dir_.string());
  } else {
    svr.Get(R"(/ui(/.*)?)", [](const httplib::Request &, httplib::Response &res) {
      res.set_content(kPlaceholderPage, "text/html");
    });
  }
}

int Service::start(const std::string &host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
    if (bound < 0) throw BindError("cannot bind " + host + ":0");
  } else if (!server_->bind_to_port(host, port)) {
    throw BindError("cannot bind " + host + ":" + std::to_string(port) +
                    " (address in use or unavailable)");
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void Service::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace secrel
