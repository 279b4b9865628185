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

#ifndef SECREL_ORACLE_H_
#define SECREL_ORACLE_H_

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "secrel/scoring.h"

namespace secrel {

enum class QueryKind { kPattern, kRelation, kEntity, kConflict };
enum class QueryStatus { kPending, kAnswered, kExpired };

std::string_view query_kind_name(QueryKind kind);
std::string_view query_status_name(QueryStatus status);

// A yes / no / don't-know question about one candidate.
struct OracleQuery {
  std::string id;  // assigned by the queue when empty
  QueryKind kind = QueryKind::kPattern;
  std::string relation;
  std::string key;      // stable candidate key, used by answer files
  std::string payload;  // human-readable rendering of the candidate
  // Conflict queries: the two competing relation names. The question is
  // whether the first one holds.
  std::vector<std::string> competing;
  // Example sentences with entity spans wrapped in [[ ]]; at most three.
  std::vector<std::string> context;
  QueryStatus status = QueryStatus::kPending;
  std::optional<Answer> answer;
  int iteration = 0;

  bool operator==(const OracleQuery &) const = default;
};

nlohmann::json query_to_json(const OracleQuery &query);

inline constexpr std::size_t kMaxContextSentences = 3;

// FIFO of queries shared between the engine and whoever answers them. All
// members are safe to call from several threads.
class OracleQueue {
 public:
  // Rejects duplicate ids and queries without context.
  std::vector<std::string> enqueue(std::vector<OracleQuery> queries);

  std::vector<OracleQuery> pending() const;
  std::vector<OracleQuery> all() const;
  std::optional<OracleQuery> get(const std::string &id) const;
  std::size_t pending_count() const;

  enum class AnswerResult { kOk, kUnknownId, kNotPending };
  AnswerResult answer(const std::string &id, Answer answer);

  // Blocks until every query in ids has left the pending state or the
  // timeout passes; whatever is still pending then expires. No timeout
  // means wait indefinitely.
  void wait(const std::vector<std::string> &ids,
            std::optional<std::chrono::milliseconds> timeout);

 private:
  bool all_settled(const std::vector<std::string> &ids) const;

  mutable std::mutex mu_;
  std::condition_variable settled_;
  std::vector<OracleQuery> queries_;
  std::map<std::string, std::size_t> index_;
  std::size_t next_id_ = 1;
};

// Pre-recorded answers keyed by candidate key.
class AnswerBook {
 public:
  AnswerBook() = default;
  explicit AnswerBook(std::map<std::string, Answer> answers) : answers_(std::move(answers)) {}

  // JSON object: candidate key -> "yes" | "no" | "dont_know". Errors carry
  // the line number.
  static AnswerBook parse(std::string_view text, const std::string &origin);
  static AnswerBook load(const std::filesystem::path &path);

  std::optional<Answer> lookup(const std::string &key) const;
  const std::map<std::string, Answer> &answers() const { return answers_; }

 private:
  std::map<std::string, Answer> answers_;
};

enum class OracleMode { kInteractive, kScripted, kService, kAutoDontKnow };

std::string_view oracle_mode_name(OracleMode mode);

class Oracle {
 public:
  // Answers every query "don't know" at once.
  static Oracle auto_dont_know();
  // Looks each query up in the book; unknown keys get "don't know".
  static Oracle scripted(AnswerBook book);
  // Prompts on the given streams one query at a time.
  static Oracle interactive(std::istream &in, std::ostream &out);
  // Waits for answers posted through the queue (by the HTTP service).
  static Oracle service(std::optional<std::chrono::milliseconds> timeout);

  OracleMode mode() const { return mode_; }
  OracleQueue &queue() { return *queue_; }
  const OracleQueue &queue() const { return *queue_; }

  std::vector<std::string> enqueue(std::vector<OracleQuery> queries);

  // Settles every pending query; returns id -> answer. Expired queries
  // count as "don't know".
  std::map<std::string, Answer> resolve_all();

  // enqueue + resolve_all; returns candidate key -> answer.
  std::map<std::string, Answer> ask(std::vector<OracleQuery> queries);

 private:
  explicit Oracle(OracleMode mode);

  OracleMode mode_;
  std::unique_ptr<OracleQueue> queue_;
  AnswerBook book_;
  std::istream *in_ = nullptr;
  std::ostream *out_ = nullptr;
  std::optional<std::chrono::milliseconds> timeout_;
};

// Terminal rendering used by interactive mode.
std::string render_query(const OracleQuery &query);

}  // namespace secrel

#endif  // SECREL_ORACLE_H_
