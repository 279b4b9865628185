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

#include <gtest/gtest.h>

#include <chrono>
#include <sstream>
#include <thread>

#include "secrel/base.h"
#include "test_util.h"

namespace secrel {
namespace {

OracleQuery query(const std::string &key, QueryKind kind = QueryKind::kPattern) {
  OracleQuery q;
  q.kind = kind;
  q.relation = "is_vendor_of";
  q.key = key;
  q.payload = "{SW_Vendor} ships {SW_Product}";
  q.context = {"[[Adobe]] ships [[Acrobat]] ."};
  return q;
}

std::vector<OracleQuery> five() {
  std::vector<OracleQuery> out;
  for (int i = 0; i < 5; ++i) out.push_back(query("pat:k" + std::to_string(i)));
  return out;
}

TEST(OracleQueue, EnqueueAndAnswer) {
  OracleQueue q;
  auto ids = q.enqueue(five());
  EXPECT_EQ(ids.size(), 5u);
  EXPECT_EQ(q.pending_count(), 5u);
  EXPECT_TRUE(q.enqueue({}).empty());
  EXPECT_EQ(q.pending_count(), 5u);

  EXPECT_EQ(q.answer(ids[2], Answer::kYes), OracleQueue::AnswerResult::kOk);
  auto got = q.get(ids[2]);
  ASSERT_TRUE(got.has_value());
  EXPECT_EQ(got->status, QueryStatus::kAnswered);
  EXPECT_EQ(got->answer, Answer::kYes);
  EXPECT_EQ(q.pending_count(), 4u);
  EXPECT_EQ(q.answer(ids[2], Answer::kNo), OracleQueue::AnswerResult::kNotPending);
  EXPECT_EQ(q.answer("nope", Answer::kNo), OracleQueue::AnswerResult::kUnknownId);
}

TEST(OracleQueue, RejectsDuplicateIdsAndMissingContext) {
  OracleQueue q;
  OracleQuery a = query("pat:a");
  a.id = "q1";
  q.enqueue({a});
  EXPECT_THROW(q.enqueue({a}), Error);
  OracleQuery bare = query("pat:b");
  bare.context.clear();
  EXPECT_THROW(q.enqueue({bare}), Error);
}

TEST(OracleQueue, WaitExpiresPending) {
  OracleQueue q;
  auto ids = q.enqueue(five());
  q.wait(ids, std::chrono::milliseconds(0));
  EXPECT_EQ(q.pending_count(), 0u);
  EXPECT_EQ(q.get(ids[0])->status, QueryStatus::kExpired);
}

TEST(OracleQueue, WaitReturnsWhenAnswered) {
  OracleQueue q;
  auto ids = q.enqueue({query("pat:a")});
  std::thread answerer([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    q.answer(ids[0], Answer::kNo);
  });
  q.wait(ids, std::nullopt);
  answerer.join();
  EXPECT_EQ(q.get(ids[0])->answer, Answer::kNo);
}

TEST(AnswerBook, ParseAndLookup) {
  AnswerBook book = AnswerBook::parse(R"({"pat:a": "yes", "rel:x:y:z": "no", "ent:q": "dont_know"})",
                                      "answers.json");
  EXPECT_EQ(book.lookup("pat:a"), Answer::kYes);
  EXPECT_EQ(book.lookup("rel:x:y:z"), Answer::kNo);
  EXPECT_EQ(book.lookup("ent:q"), Answer::kDontKnow);
  EXPECT_FALSE(book.lookup("pat:missing").has_value());
}

TEST(AnswerBook, ErrorsCarryLineNumbers) {
  try {
    AnswerBook::parse("{\n  \"pat:a\": \"yes\",\n  \"pat:b\": \"perhaps\"\n}", "answers.json");
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("answers.json:3:"), std::string::npos) << e.what();
  }
  try {
    AnswerBook::parse("{\n  \"pat:a\": \"yes\"\n  \"pat:b\": \"no\"\n}", "answers.json");
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("answers.json:3:"), std::string::npos) << e.what();
  }
}

TEST(Oracle, ScriptedLooksUpKeys) {
  Oracle o = Oracle::scripted(AnswerBook({{"pat:k1", Answer::kYes}, {"pat:k3", Answer::kNo}}));
  auto answers = o.ask(five());
  ASSERT_EQ(answers.size(), 5u);
  EXPECT_EQ(answers.at("pat:k1"), Answer::kYes);
  EXPECT_EQ(answers.at("pat:k3"), Answer::kNo);
  EXPECT_EQ(answers.at("pat:k0"), Answer::kDontKnow);
}

TEST(Oracle, AutoAnswersDontKnow) {
  Oracle o = Oracle::auto_dont_know();
  auto answers = o.ask(five());
  ASSERT_EQ(answers.size(), 5u);
  for (const auto &[key, a] : answers) EXPECT_EQ(a, Answer::kDontKnow) << key;
}

TEST(Oracle, ServiceTimeoutZero) {
  Oracle o = Oracle::service(std::chrono::milliseconds(0));
  auto answers = o.ask(five());
  ASSERT_EQ(answers.size(), 5u);
  for (const auto &[key, a] : answers) EXPECT_EQ(a, Answer::kDontKnow) << key;
}

TEST(Oracle, ServiceTakesPostedAnswers) {
  Oracle o = Oracle::service(std::chrono::seconds(10));
  std::thread answerer([&] {
    while (o.queue().pending_count() < 2) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    for (const OracleQuery &q : o.queue().pending()) {
      o.queue().answer(q.id, q.key == "pat:a" ? Answer::kYes : Answer::kNo);
    }
  });
  auto answers = o.ask({query("pat:a"), query("pat:b")});
  answerer.join();
  EXPECT_EQ(answers.at("pat:a"), Answer::kYes);
  EXPECT_EQ(answers.at("pat:b"), Answer::kNo);
}

TEST(Oracle, InteractiveReadsReplies) {
  std::istringstream in("y\nwhat\nn\n");
  std::ostringstream out;
  Oracle o = Oracle::interactive(in, out);
  auto answers = o.ask({query("pat:a"), query("pat:b"), query("pat:c")});
  EXPECT_EQ(answers.at("pat:a"), Answer::kYes);
  EXPECT_EQ(answers.at("pat:b"), Answer::kNo);
  EXPECT_EQ(answers.at("pat:c"), Answer::kDontKnow);
  EXPECT_NE(out.str().find("[[Adobe]]"), std::string::npos);
}

TEST(Query, JsonFields) {
  OracleQueue q;
  q.enqueue({query("pat:a", QueryKind::kRelation)});
  auto j = query_to_json(q.pending()[0]);
  EXPECT_EQ(j["kind"], "relation");
  EXPECT_EQ(j["status"], "pending");
  EXPECT_EQ(j["key"], "pat:a");
  EXPECT_TRUE(j["answer"].is_null());
  EXPECT_FALSE(j["id"].get<std::string>().empty());
}

}  // namespace
}  // namespace secrel
