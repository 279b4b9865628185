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

#include "secrel/oracle.h"

#include <istream>
#include <ostream>
#include <sstream>

#include "secrel/base.h"

namespace secrel {

std::string_view query_kind_name(QueryKind kind) {
  switch (kind) {
    case QueryKind::kPattern: return "pattern";
    case QueryKind::kRelation: return "relation";
    case QueryKind::kEntity: return "entity";
    case QueryKind::kConflict: return "conflict";
  }
  return "pattern";
}

std::string_view query_status_name(QueryStatus status) {
  switch (status) {
    case QueryStatus::kPending: return "pending";
    case QueryStatus::kAnswered: return "answered";
    case QueryStatus::kExpired: return "expired";
  }
  return "pending";
}

nlohmann::json query_to_json(const OracleQuery &q) {
  return {{"id", q.id},
          {"kind", query_kind_name(q.kind)},
          {"relation", q.relation},
          {"key", q.key},
          {"payload", q.payload},
          {"competing", q.competing},
          {"context", q.context},
          {"status", query_status_name(q.status)},
          {"answer", q.answer ? nlohmann::json(answer_name(*q.answer)) : nlohmann::json(nullptr)},
          {"iteration", q.iteration}};
}

std::vector<std::string> OracleQueue::enqueue(std::vector<OracleQuery> queries) {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> ids;
  std::map<std::string, bool> batch;
  for (OracleQuery &q : queries) {
    if (q.id.empty()) q.id = "q" + std::to_string(next_id_++);
    if (index_.count(q.id) || batch.count(q.id)) throw Error("duplicate query id '" + q.id + "'");
    if (q.context.empty()) throw Error("query '" + q.id + "' has no context sentence");
    if (q.context.size() > kMaxContextSentences) q.context.resize(kMaxContextSentences);
    batch[q.id] = true;
  }
  for (OracleQuery &q : queries) {
    q.status = QueryStatus::kPending;
    q.answer.reset();
    ids.push_back(q.id);
    index_[q.id] = queries_.size();
    queries_.push_back(std::move(q));
  }
  return ids;
}

std::vector<OracleQuery> OracleQueue::pending() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<OracleQuery> out;
  for (const OracleQuery &q : queries_) {
    if (q.status == QueryStatus::kPending) out.push_back(q);
  }
  return out;
}

std::vector<OracleQuery> OracleQueue::all() const {
  std::lock_guard<std::mutex> lock(mu_);
  return queries_;
}

std::optional<OracleQuery> OracleQueue::get(const std::string &id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return queries_[it->second];
}

std::size_t OracleQueue::pending_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::size_t n = 0;
  for (const OracleQuery &q : queries_) n += q.status == QueryStatus::kPending;
  return n;
}

OracleQueue::AnswerResult OracleQueue::answer(const std::string &id, Answer answer) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = index_.find(id);
    if (it == index_.end()) return AnswerResult::kUnknownId;
    OracleQuery &q = queries_[it->second];
    if (q.status != QueryStatus::kPending) return AnswerResult::kNotPending;
    q.status = QueryStatus::kAnswered;
    q.answer = answer;
  }
  settled_.notify_all();
  return AnswerResult::kOk;
}

bool OracleQueue::all_settled(const std::vector<std::string> &ids) const {
  for (const std::string &id : ids) {
    auto it = index_.find(id);
    if (it != index_.end() && queries_[it->second].status == QueryStatus::kPending) return false;
  }
  return true;
}

void OracleQueue::wait(const std::vector<std::string> &ids,
                       std::optional<std::chrono::milliseconds> timeout) {
  std::unique_lock<std::mutex> lock(mu_);
  auto done = [&] { return all_settled(ids); };
  if (timeout) {
    settled_.wait_for(lock, *timeout, done);
  } else {
    settled_.wait(lock, done);
  }
  for (const std::string &id : ids) {
    auto it = index_.find(id);
    if (it == index_.end()) continue;
    OracleQuery &q = queries_[it->second];
    if (q.status == QueryStatus::kPending) q.status = QueryStatus::kExpired;
  }
}

AnswerBook AnswerBook::parse(std::string_view text, const std::string &origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw Error(origin + ":" + std::to_string(line_of_offset(text, e.byte)) +
                ": malformed answers file: " + e.what());
  }
  if (!j.is_object()) throw Error(origin + ":1: answers file must hold a JSON object");
  std::map<std::string, Answer> answers;
  for (const auto &[key, value] : j.items()) {
    std::optional<Answer> answer;
    if (value.is_string()) answer = parse_answer(value.get<std::string>());
    if (!answer) {
      std::size_t at = text.find(nlohmann::json(key).dump());
      int line = at == std::string_view::npos ? 1 : line_of_offset(text, at);
      throw Error(origin + ":" + std::to_string(line) + ": answer for '" + key +
                  "' must be \"yes\", \"no\" or \"dont_know\"");
    }
    answers[key] = *answer;
  }
  return AnswerBook(std::move(answers));
}

AnswerBook AnswerBook::load(const std::filesystem::path &path) {
  return parse(read_file(path.string()), path.string());
}

std::optional<Answer> AnswerBook::lookup(const std::string &key) const {
  auto it = answers_.find(key);
  if (it == answers_.end()) return std::nullopt;
  return it->second;
}

std::string_view oracle_mode_name(OracleMode mode) {
  switch (mode) {
    case OracleMode::kInteractive: return "interactive";
    case OracleMode::kScripted: return "scripted";
    case OracleMode::kService: return "serve";
    case OracleMode::kAutoDontKnow: return "auto";
  }
  return "auto";
}

Oracle::Oracle(OracleMode mode) : mode_(mode), queue_(std::make_unique<OracleQueue>()) {}

Oracle Oracle::auto_dont_know() { return Oracle(OracleMode::kAutoDontKnow); }

Oracle Oracle::scripted(AnswerBook book) {
  Oracle oracle(OracleMode::kScripted);
  oracle.book_ = std::move(book);
  return oracle;
}

Oracle Oracle::interactive(std::istream &in, std::ostream &out) {
  Oracle oracle(OracleMode::kInteractive);
  oracle.in_ = &in;
  oracle.out_ = &out;
  return oracle;
}

Oracle Oracle::service(std::optional<std::chrono::milliseconds> timeout) {
  Oracle oracle(OracleMode::kService);
  oracle.timeout_ = timeout;
  return oracle;
}

std::vector<std::string> Oracle::enqueue(std::vector<OracleQuery> queries) {
  return queue_->enqueue(std::move(queries));
}

std::string render_query(const OracleQuery &q) {
  std::ostringstream out;
  out << "[" << query_kind_name(q.kind) << "] " << q.relation << "\n";
  if (q.kind == QueryKind::kConflict && q.competing.size() == 2) {
    out << "  does '" << q.competing[0] << "' hold rather than '" << q.competing[1] << "'?\n";
  }
  out << "  candidate: " << q.payload << "\n";
  for (std::size_t i = 0; i < q.context.size(); ++i) {
    out << "  " << (i + 1) << ". " << q.context[i] << "\n";
  }
  return out.str();
}

std::map<std::string, Answer> Oracle::resolve_all() {
  std::vector<OracleQuery> pending = queue_->pending();
  switch (mode_) {
    case OracleMode::kAutoDontKnow:
      for (const OracleQuery &q : pending) queue_->answer(q.id, Answer::kDontKnow);
      break;
    case OracleMode::kScripted:
      for (const OracleQuery &q : pending) {
        queue_->answer(q.id, book_.lookup(q.key).value_or(Answer::kDontKnow));
      }
      break;
    case OracleMode::kInteractive: {
      bool eof = false;
      for (const OracleQuery &q : pending) {
        Answer answer = Answer::kDontKnow;
        if (!eof) {
          *out_ << render_query(q);
          for (;;) {
            *out_ << "  (y)es / (n)o / (d)on't know: " << std::flush;
            std::string line;
            if (!std::getline(*in_, line)) {
              eof = true;
              break;
            }
            std::string reply = casefold(line);
            reply.erase(0, reply.find_first_not_of(" \t"));
            reply.erase(reply.find_last_not_of(" \t\r") + 1);
            if (reply == "y" || reply == "yes") {
              answer = Answer::kYes;
            } else if (reply == "n" || reply == "no") {
              answer = Answer::kNo;
            } else if (reply == "d" || reply == "dont_know" || reply == "don't know" ||
                       reply == "dk") {
              answer = Answer::kDontKnow;
            } else {
              continue;
            }
            break;
          }
        }
        queue_->answer(q.id, answer);
      }
      break;
    }
    case OracleMode::kService: {
      std::vector<std::string> ids;
      for (const OracleQuery &q : pending) ids.push_back(q.id);
      queue_->wait(ids, timeout_);
      break;
    }
  }
  std::map<std::string, Answer> answers;
  for (const OracleQuery &q : pending) {
    std::optional<OracleQuery> settled = queue_->get(q.id);
    answers[q.id] = settled && settled->answer ? *settled->answer : Answer::kDontKnow;
  }
  return answers;
}

std::map<std::string, Answer> Oracle::ask(std::vector<OracleQuery> queries) {
  std::map<std::string, std::string> key_of;
  for (const std::string &id : enqueue(std::move(queries))) key_of[id] = queue_->get(id)->key;
  std::map<std::string, Answer> by_key;
  for (const auto &[id, answer] : resolve_all()) {
    auto it = key_of.find(id);
    if (it != key_of.end()) by_key[it->second] = answer;
  }
  return by_key;
}

}  // namespace secrel
