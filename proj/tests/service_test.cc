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

#include <gtest/gtest.h>

#include <chrono>
#include <thread>

#include "httplib.h"
#include "secrel/base.h"
#include "secrel/bootstrap.h"
#include "test_util.h"

namespace secrel {
namespace {

using nlohmann::json;

OracleQuery query(const std::string &key) {
  OracleQuery q;
  q.kind = QueryKind::kRelation;
  q.relation = "is_vendor_of";
  q.key = key;
  q.payload = "(Adobe, is_vendor_of, Acrobat)";
  q.context = {"[[Adobe]] ships [[Acrobat]] ."};
  return q;
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override { port_ = service_.start("127.0.0.1", 0); }
  httplib::Client client() {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(5, 0);
    return c;
  }

  OracleQueue queue_;
  RunMonitor monitor_;
  Service service_{queue_, monitor_};
  int port_ = 0;
};

TEST_F(ServiceTest, PendingEmpty) {
  auto res = client().Get("/api/queries/pending");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body), json::array());
}

TEST_F(ServiceTest, PendingListsQueries) {
  queue_.enqueue({query("rel:a"), query("rel:b")});
  auto res = client().Get("/api/queries/pending");
  ASSERT_TRUE(res);
  json body = json::parse(res->body);
  ASSERT_EQ(body.size(), 2u);
  EXPECT_EQ(body[0]["key"], "rel:a");
  EXPECT_EQ(body[0]["context"][0], "[[Adobe]] ships [[Acrobat]] .");
}

TEST_F(ServiceTest, AnswerLifecycle) {
  auto ids = queue_.enqueue({query("rel:a")});
  auto c = client();
  auto res = c.Post("/api/queries/" + ids[0] + "/answer", R"({"answer":"yes"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["answer"], "yes");
  EXPECT_EQ(queue_.get(ids[0])->answer, Answer::kYes);

  res = c.Post("/api/queries/" + ids[0] + "/answer", R"({"answer":"no"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 409);
  EXPECT_EQ(queue_.get(ids[0])->answer, Answer::kYes);
}

TEST_F(ServiceTest, AnswerErrors) {
  auto ids = queue_.enqueue({query("rel:a")});
  auto c = client();
  auto res = c.Post("/api/queries/nope/answer", R"({"answer":"yes"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  res = c.Post("/api/queries/" + ids[0] + "/answer", "not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  res = c.Post("/api/queries/" + ids[0] + "/answer", R"({"answer":"perhaps"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(queue_.pending_count(), 1u);
}

TEST_F(ServiceTest, CorsHeadersAndPreflight) {
  auto c = client();
  auto res = c.Get("/api/state");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
  res = c.Options("/api/queries/q1/answer");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 204);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_NE(res->get_header_value("Access-Control-Allow-Methods").find("POST"), std::string::npos);
}

TEST_F(ServiceTest, StateSnapshot) {
  queue_.enqueue({query("rel:a")});
  auto res = client().Get("/api/state");
  ASSERT_TRUE(res);
  json body = json::parse(res->body);
  EXPECT_EQ(body["pending"], 1);
  EXPECT_EQ(body["running"], true);
  EXPECT_TRUE(body["relations"].is_object());
}

TEST_F(ServiceTest, UiPlaceholderWithoutAssets) {
  auto res = client().Get("/ui");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_NE(res->body.find("/api/queries/pending"), std::string::npos);
}

TEST(Service, ServesUiDirectory) {
  testing::TempDir dir;
  write_file((dir / "index.html").string(), "<html>review</html>");
  OracleQueue queue;
  RunMonitor monitor;
  Service service(queue, monitor, dir.path());
  int port = service.start("127.0.0.1", 0);
  httplib::Client c("127.0.0.1", port);
  auto res = c.Get("/ui/index.html");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, "<html>review</html>");
}

TEST(Service, PortInUseRaisesBindError) {
  OracleQueue queue;
  RunMonitor monitor;
  Service first(queue, monitor);
  int port = first.start("127.0.0.1", 0);
  Service second(queue, monitor);
  EXPECT_THROW(second.start("127.0.0.1", port), BindError);
}

TEST(Service, BindAddressParsing) {
  EXPECT_EQ(parse_bind_address("127.0.0.1:8080"), (std::pair<std::string, int>{"127.0.0.1", 8080}));
  EXPECT_THROW(parse_bind_address("localhost"), Error);
  EXPECT_THROW(parse_bind_address("localhost:http"), Error);
  EXPECT_THROW(parse_bind_address("localhost:70000"), Error);
}

// The engine runs the two-hop fixture in service mode while this thread
// answers through HTTP.
TEST(Service, YesAnswerShowsOverrideInNextSnapshot) {
  const GazetteerSet gazetteers = load_gazetteers(testing::data_dir() / "gazetteers");
  auto docs = load_corpus(testing::fixture_dir() / "two_hop" / "corpus", CorpusFormat::kAuto);
  for (Document &d : docs) ensure_trees(d);
  TaggedCorpus corpus = tag_corpus(std::move(docs), gazetteers);
  RelationSeeds seeds = load_seeds(testing::fixture_dir() / "two_hop" / "seeds").at("is_vendor_of");

  Oracle oracle = Oracle::service(std::nullopt);
  RunMonitor monitor;
  Service service(oracle.queue(), monitor);
  int port = service.start("127.0.0.1", 0);

  BootstrapConfig config;
  config.query_fraction = 1.0;
  EngineHooks hooks;
  hooks.on_iteration = [&](const BootstrapState &s) { monitor.update(s); };
  monitor.set_current("is_vendor_of");
  std::atomic<bool> done{false};
  BootstrapState final_state;
  std::thread engine([&] {
    final_state = bootstrap_relation(initial_state(require_relation("is_vendor_of"), seeds), corpus,
                                     config, &oracle, nullptr, hooks);
    monitor.set_finished();
    done = true;
  });

  const std::string target = relation_key("is_vendor_of", "Adobe", "Acrobat");
  httplib::Client c("127.0.0.1", port);
  c.set_read_timeout(5, 0);
  bool checked = false;
  auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(30);
  while (!done && std::chrono::steady_clock::now() < deadline) {
    auto state = c.Get("/api/state");
    ASSERT_TRUE(state);
    json snap = json::parse(state->body);
    if (!checked && snap["relations"].contains("is_vendor_of") &&
        snap["relations"]["is_vendor_of"]["iteration"] == 1) {
      for (const json &r : snap["relations"]["is_vendor_of"]["last_cycle"]["relations"]) {
        if (r["key"] == target) {
          EXPECT_EQ(r["score"], 1000.0);
          EXPECT_EQ(r["answer"], "yes");
          EXPECT_EQ(r["accepted"], true);
          checked = true;
        }
      }
      ASSERT_TRUE(checked) << snap.dump();
    }
    auto pending = c.Get("/api/queries/pending");
    ASSERT_TRUE(pending);
    for (const json &q : json::parse(pending->body)) {
      std::string answer = q["key"] == target ? "yes" : "dont_know";
      c.Post("/api/queries/" + q["id"].get<std::string>() + "/answer",
             json{{"answer", answer}}.dump(), "application/json");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  engine.join();
  EXPECT_TRUE(checked);
  EXPECT_EQ(final_state.known_relations.at(target).provenance, RelationSource::kUser);
  EXPECT_EQ(final_state.answers.at(target), Answer::kYes);
}

}  // namespace
}  // namespace secrel
