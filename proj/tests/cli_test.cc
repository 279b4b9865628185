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

#include "cli.h"

#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "secrel/base.h"
#include "secrel/bootstrap.h"
#include "secrel/evalgen.h"
#include "secrel/service.h"
#include "test_util.h"

namespace secrel {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string> &args, const std::string &input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string gazetteers() { return (testing::data_dir() / "gazetteers").string(); }
std::string two_hop(const std::string &part) {
  return (testing::fixture_dir() / "two_hop" / part).string();
}

std::vector<RelationInstance> bootstrap_two_hop(const testing::TempDir &dir, const std::string &out,
                                                std::vector<std::string> extra = {}) {
  std::vector<std::string> args = {"bootstrap", "--corpus", two_hop("corpus"), "--gazetteers",
                                   gazetteers(), "--seeds", two_hop("seeds"), "--out",
                                   (dir / out).string()};
  args.insert(args.end(), extra.begin(), extra.end());
  CliRun r = run(args);
  EXPECT_EQ(r.code, kExitOk) << r.err;
  return load_relation_list(dir / out / "extracted.json");
}

bool contains(const std::vector<RelationInstance> &list, const std::string &s, const std::string &o) {
  for (const auto &r : list)
    if (r.key() == relation_key("is_vendor_of", s, o)) return true;
  return false;
}

TEST(CliTag, FixtureCounts) {
  testing::TempDir dir;
  write_file((dir / "doc.txt").string(), "Adobe Acrobat 11.0.08 fixes CVE-2014-1127");
  fs::path out = dir / "tags.json";
  CliRun r = run({"tag", "--corpus", dir.path().string(), "--gazetteers", gazetteers(), "--out",
               out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json j = json::parse(read_file(out.string()));
  ASSERT_EQ(j["documents"].size(), 1u);
  EXPECT_EQ(j["documents"][0]["mentions"].size(), 4u);
  EXPECT_EQ(j["documents"][0]["counts"]["CVE_ID"], 1);
  EXPECT_EQ(j["documents"][0]["counts"]["MS_ID"], 0);
}

TEST(CliTag, EmptyCorpus) {
  testing::TempDir dir;
  fs::create_directories(dir / "corpus");
  fs::path out = dir / "tags.json";
  CliRun r = run({"tag", "--corpus", (dir / "corpus").string(), "--gazetteers", gazetteers(), "--out",
               out.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(json::parse(read_file(out.string()))["documents"].empty());
}

TEST(CliTag, BadGazetteer) {
  testing::TempDir dir;
  write_file((dir / "SW_Vendor.tsv").string(), "Adobe\tAdobe Systems\nAcrobat\tAdobe Systems\n");
  write_file((dir / "SW_Product.tsv").string(), "Acrobat\n");
  write_file((dir / "Vuln_Term.tsv").string(), "xss\n");
  CliRun r = run({"tag", "--corpus", two_hop("corpus"), "--gazetteers", dir.path().string(), "--out",
               (dir / "t.json").string()});
  EXPECT_EQ(r.code, kExitUsage);
  fs::remove(dir / "Vuln_Term.tsv");
  write_file((dir / "SW_Vendor.tsv").string(), "Adobe\n");
  r = run({"tag", "--corpus", two_hop("corpus"), "--gazetteers", dir.path().string(), "--out",
           (dir / "t.json").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("Vuln_Term"), std::string::npos) << r.err;
}

TEST(CliBootstrap, TwoHopAuto) {
  testing::TempDir dir;
  auto extracted = bootstrap_two_hop(dir, "run", {"--oracle", "auto"});
  EXPECT_TRUE(contains(extracted, "Adobe", "Acrobat"));
  EXPECT_TRUE(contains(extracted, "Oracle", "Java"));
  BootstrapState s = import_state(dir / "run" / "is_vendor_of.state.json");
  EXPECT_EQ(s.history.size(), 3u);
}

TEST(CliBootstrap, RerunIsByteIdentical) {
  testing::TempDir dir;
  bootstrap_two_hop(dir, "a", {"--oracle", "auto"});
  bootstrap_two_hop(dir, "b", {"--oracle", "auto"});
  for (const std::string &f : {"extracted.json", "is_vendor_of.state.json"}) {
    EXPECT_EQ(read_file((dir / "a" / f).string()), read_file((dir / "b" / f).string())) << f;
  }
}

TEST(CliBootstrap, ScriptedAllNoKeepsOnlySeeds) {
  testing::TempDir dir;
  bootstrap_two_hop(dir, "probe", {"--oracle", "auto"});
  BootstrapState probe = import_state(dir / "probe" / "is_vendor_of.state.json");
  json answers = json::object();
  for (const IterationRecord &r : probe.history) {
    for (const CandidateRecord &c : r.patterns) answers[c.key] = "no";
    for (const CandidateRecord &c : r.relations) answers[c.key] = "no";
  }
  write_file((dir / "answers.json").string(), answers.dump(2));
  write_file((dir / "config.json").string(), R"({"query_fraction": 1.0})");
  auto extracted = bootstrap_two_hop(
      dir, "scripted",
      {"--oracle", "scripted:" + (dir / "answers.json").string(), "--config",
       (dir / "config.json").string()});
  ASSERT_EQ(extracted.size(), 1u);
  EXPECT_TRUE(contains(extracted, "Microsoft", "Internet Explorer"));
  EXPECT_EQ(extracted[0].provenance, RelationSource::kSeed);
}

TEST(CliBootstrap, InvalidFractionNamesField) {
  testing::TempDir dir;
  write_file((dir / "config.json").string(), R"({"accept_fraction": 1.7})");
  CliRun r = run({"bootstrap", "--corpus", two_hop("corpus"), "--gazetteers", gazetteers(), "--seeds",
               two_hop("seeds"), "--out", (dir / "o").string(), "--config",
               (dir / "config.json").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("accept_fraction"), std::string::npos) << r.err;
}

TEST(CliBootstrap, PortInUse) {
  OracleQueue queue;
  RunMonitor monitor;
  Service blocker(queue, monitor);
  int port = blocker.start("127.0.0.1", 0);
  testing::TempDir dir;
  CliRun r = run({"bootstrap", "--corpus", two_hop("corpus"), "--gazetteers", gazetteers(), "--seeds",
               two_hop("seeds"), "--out", (dir / "o").string(), "--oracle", "serve", "--bind",
               "127.0.0.1:" + std::to_string(port)});
  EXPECT_EQ(r.code, kExitEnvironment) << r.err;
}

TEST(CliBootstrap, UnreadableInputs) {
  testing::TempDir dir;
  CliRun r = run({"bootstrap", "--corpus", (dir / "missing").string(), "--gazetteers", gazetteers(),
               "--seeds", two_hop("seeds"), "--out", (dir / "o").string()});
  EXPECT_EQ(r.code, kExitUsage);
  r = run({"bootstrap", "--corpus", two_hop("corpus")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
}

// Gold and extracted files reproducing the published per-relation counts.
void write_published_counts(const testing::TempDir &dir) {
  const std::vector<std::pair<int, int>> counts = {{45, 12}, {54, 19}, {0, 0}, {0, 0},
                                                   {2, 0},   {30, 2},  {0, 0}, {22, 0}};
  std::vector<GoldRelation> gold;
  std::vector<RelationInstance> extracted;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::string name(kRelationTypes[i].name);
    for (int k = 0; k < counts[i].first; ++k) {
      RelationInstance r{name, "s" + std::to_string(k), "o" + std::to_string(k)};
      gold.push_back({r, "doc"});
      extracted.push_back(r);
    }
    for (int k = 0; k < counts[i].second; ++k) {
      extracted.push_back({name, "fp" + std::to_string(k), "o"});
    }
  }
  save_gold(gold, dir / "gold.json");
  save_relation_list(extracted, dir / "extracted.json");
}

TEST(CliEval, PublishedTotals) {
  testing::TempDir dir;
  write_published_counts(dir);
  CliRun r = run({"eval", "--extracted", (dir / "extracted.json").string(), "--gold",
               (dir / "gold.json").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("   Totals          153  33  0.82"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("3  CVE_of_vuln       -   -     -"), std::string::npos) << r.out;
  r = run({"eval", "--extracted", (dir / "extracted.json").string(), "--gold",
           (dir / "gold.json").string(), "--json"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(json::parse(r.out)["totals"]["tp"], 153);
}

TEST(CliEval, RecallOnLabeledDocument) {
  testing::TempDir dir;
  std::vector<GoldRelation> gold;
  std::vector<RelationInstance> extracted;
  for (int k = 0; k < 33; ++k) {
    RelationInstance r{"vuln_of_SW", "v" + std::to_string(k), "p"};
    gold.push_back({r, "article"});
    if (k < 8) extracted.push_back(r);
  }
  save_gold(gold, dir / "gold.json");
  save_relation_list(extracted, dir / "extracted.json");
  CliRun r = run({"eval", "--extracted", (dir / "extracted.json").string(), "--gold",
               (dir / "gold.json").string(), "--labeled-docs", "article"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("Recall: 8 of 33 = 0.24"), std::string::npos) << r.out;
}

TEST(CliEval, PerfectAndUnreadable) {
  testing::TempDir dir;
  std::vector<GoldRelation> gold = {{{"is_vendor_of", "Adobe", "Acrobat"}, "d"}};
  std::vector<RelationInstance> extracted = {gold[0].instance};
  save_gold(gold, dir / "gold.json");
  save_relation_list(extracted, dir / "extracted.json");
  CliRun r = run({"eval", "--extracted", (dir / "extracted.json").string(), "--gold",
               (dir / "gold.json").string()});
  ASSERT_EQ(r.code, kExitOk);
  std::string row = r.out.substr(r.out.find("1  is_vendor_of"));
  row = row.substr(0, row.find('\n'));
  EXPECT_EQ(split_whitespace(row), (std::vector<std::string>{"1", "is_vendor_of", "1", "0", "1.00"}));
  r = run({"eval", "--extracted", (dir / "nope.json").string(), "--gold",
           (dir / "gold.json").string()});
  EXPECT_EQ(r.code, kExitUsage);
}

TEST(CliGenerate, WritesCorpusGoldAndSeeds) {
  testing::TempDir dir;
  CliRun r = run({"generate", "--gazetteers", gazetteers(), "--out", dir.path().string(), "--docs",
               "3", "--relations-per-doc", "2", "--seed", "42"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(load_corpus(dir / "corpus", CorpusFormat::kAuto).size(), 3u);
  EXPECT_EQ(load_gold(dir / "gold.json").size(), 6u);
  EXPECT_EQ(load_seeds(dir / "seeds").size(), 8u);
}

TEST(CliTrainRelevance, FitsLabeledCorpus) {
  testing::TempDir dir;
  fs::create_directories(dir / "corpus");
  auto labeled = [&](const std::string &id, const std::string &text, bool relevant) {
    Document d = document_from_text(id, "", text);
    d.relevance_label = relevant;
    save_document(d, dir / "corpus" / (id + ".json"));
  };
  labeled("a", "Adobe fixed CVE-2014-1127 in Acrobat 11.0.08 after a xss report.", true);
  labeled("b", "Microsoft shipped MS14-012 for Internet Explorer.", true);
  labeled("c", "The weather was pleasant all week.", false);
  labeled("d", "Our team went hiking on Sunday.", false);
  CliRun r = run({"train-relevance", "--corpus", (dir / "corpus").string(), "--gazetteers",
               gazetteers(), "--out", (dir / "model.json").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json model = json::parse(read_file((dir / "model.json").string()));
  EXPECT_EQ(model["weights"].size(), 7u);
}

}  // namespace
}  // namespace secrel
