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

#include "secrel/corpus.h"

#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "secrel/base.h"
#include "test_util.h"

namespace secrel {
namespace {

using testing::TempDir;

constexpr const char *kMicrosoftSentence =
    "Microsoft has released a fix for a critical bug that affected its Internet Explorer "
    "browser.";

std::vector<std::string> texts(const Sentence &s) {
  std::vector<std::string> out;
  for (const Token &t : s.tokens) out.push_back(t.text);
  return out;
}

TEST(Tokenize, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, SimpleSentence) {
  auto sentences = tokenize("I like eggs.");
  ASSERT_EQ(sentences.size(), 1u);
  EXPECT_EQ(texts(sentences[0]), (std::vector<std::string>{"I", "like", "eggs", "."}));
}

TEST(Tokenize, SentenceBoundaryAfterIdentifier) {
  auto sentences = tokenize("See CVE-2014-1127. Patch now!");
  ASSERT_EQ(sentences.size(), 2u);
  EXPECT_EQ(texts(sentences[0]), (std::vector<std::string>{"See", "CVE-2014-1127", "."}));
  EXPECT_EQ(texts(sentences[1]), (std::vector<std::string>{"Patch", "now", "!"}));
}

TEST(Tokenize, FixtureSentenceHasSixteenTokens) {
  auto sentences = tokenize(kMicrosoftSentence);
  ASSERT_EQ(sentences.size(), 1u);
  EXPECT_EQ(sentences[0].tokens.size(), 16u);
  EXPECT_EQ(sentences[0].tokens.back().text, ".");
}

TEST(Tokenize, KeepsInternalDotsAndCallSuffix) {
  auto sentences = tokenize("Acrobat 11.0.08 loads reg.exe and pAlloc() today.");
  ASSERT_EQ(sentences.size(), 1u);
  EXPECT_EQ(texts(sentences[0]), (std::vector<std::string>{"Acrobat", "11.0.08", "loads",
                                                           "reg.exe", "and", "pAlloc()",
                                                           "today", "."}));
}

TEST(Tokenize, OffsetsPointIntoText) {
  std::string text = "Adobe (again) patched \"Flash Player\", see MS14-012.\nDone? Yes!";
  for (const Sentence &s : tokenize(text)) {
    for (const Token &t : s.tokens) {
      EXPECT_EQ(text.substr(t.char_start, t.char_end - t.char_start), t.text);
      EXPECT_EQ(t.pos, kUntaggedPos);
    }
  }
}

TEST(ParseTree, ReadsExampleTree) {
  ParseTree t = parse_bracketed_tree("(S (NP (N I)) (VP (V like) (N eggs)))");
  EXPECT_EQ(t.label, "S");
  auto leaves = tree_leaves(t);
  ASSERT_EQ(leaves.size(), 3u);
  EXPECT_EQ(leaves[0]->label, "I");
  EXPECT_EQ(leaves[1]->label, "like");
  EXPECT_EQ(leaves[2]->label, "eggs");
  EXPECT_EQ(*leaves[2]->leaf_token, 2);
  EXPECT_EQ(tree_path(t, 0, 2), (std::vector<std::string>{"N", "NP", "S", "VP", "N"}));
}

TEST(ParseTree, SinglePreterminal) {
  ParseTree t = parse_bracketed_tree("(X leaf)");
  EXPECT_EQ(t.label, "X");
  EXPECT_TRUE(t.is_preterminal());
  EXPECT_EQ(t.children[0].label, "leaf");
}

TEST(ParseTree, TruncatedInputReportsOffset) {
  try {
    parse_bracketed_tree("(S (NP");
    FAIL() << "expected a parse error";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.offset(), 6u);
  }
  EXPECT_THROW(parse_bracketed_tree("(S ())"), ParseError);
  EXPECT_THROW(parse_bracketed_tree("(S (N a)))"), ParseError);
}

TEST(ParseTree, BracketedRoundTrip) {
  std::string text = "(S (NP (N I)) (VP (V like) (N eggs)))";
  EXPECT_EQ(to_bracketed(parse_bracketed_tree(text)), text);
}

TEST(FlatTree, Construction) {
  Sentence s = testing::make_tagged_sentence({{"I", "N"}, {"like", "V"}, {"eggs", "N"}});
  ParseTree t = flat_tree(s);
  EXPECT_EQ(t.label, "S");
  ASSERT_EQ(t.children.size(), 3u);
  for (const ParseTree &c : t.children) EXPECT_TRUE(c.is_preterminal());
  EXPECT_EQ(tree_path(t, 0, 2), (std::vector<std::string>{"N", "S", "N"}));

  ParseTree one = flat_tree(testing::make_tagged_sentence({{"Hi", "UH"}}));
  EXPECT_EQ(one.children.size(), 1u);
  EXPECT_THROW(flat_tree(Sentence{}), Error);
}

TEST(AttachTree, FillsTagsAndChecksAlignment) {
  Sentence s = testing::make_sentence(std::vector<std::string>{"I", "like", "eggs"});
  attach_tree(s, parse_bracketed_tree("(S (NP (N I)) (VP (V like) (N eggs)))"));
  EXPECT_EQ(s.tokens[1].pos, "V");
  Sentence bad = testing::make_sentence(std::vector<std::string>{"I", "like", "ham"});
  EXPECT_THROW(attach_tree(bad, parse_bracketed_tree("(S (NP (N I)) (VP (V like) (N eggs)))")),
               Error);
}

nlohmann::json annotated_doc() {
  return {{"id", "doc-1"},
          {"source_uri", "file://doc-1"},
          {"raw_text", "I like eggs. You do too."},
          {"sentences",
           {{{"tokens",
              {{{"text", "I"}, {"pos", "N"}, {"start", 0}, {"end", 1}},
               {{"text", "like"}, {"pos", "V"}, {"start", 2}, {"end", 6}},
               {{"text", "eggs"}, {"pos", "N"}, {"start", 7}, {"end", 11}},
               {{"text", "."}, {"pos", "."}, {"start", 11}, {"end", 12}}}},
             {"tree", "(S (NP (N I)) (VP (V like) (N eggs)) (. .))"}},
            {{"tokens",
              {{{"text", "You"}, {"pos", "PRP"}, {"start", 13}, {"end", 16}},
               {{"text", "do"}, {"pos", "VBP"}, {"start", 17}, {"end", 19}},
               {{"text", "too"}, {"pos", "RB"}, {"start", 20}, {"end", 23}},
               {{"text", "."}, {"pos", "."}, {"start", 23}, {"end", 24}}}},
             {"tree", "(S (NP (PRP You)) (VP (VBP do) (ADVP (RB too))) (. .))"}}}},
          {"relevance_label", true}};
}

TEST(LoadCorpus, AnnotatedDirectory) {
  TempDir dir;
  write_file((dir / "doc-1.json").string(), annotated_doc().dump(2));
  auto docs = load_corpus(dir.path(), CorpusFormat::kAuto);
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].id, "doc-1");
  EXPECT_EQ(docs[0].sentences.size(), 2u);
  EXPECT_EQ(docs[0].annotation_level, AnnotationLevel::kParsed);
  EXPECT_EQ(docs[0].relevance_label, std::optional<bool>(true));
}

TEST(LoadCorpus, EmptyDirectory) {
  TempDir dir;
  EXPECT_TRUE(load_corpus(dir.path(), CorpusFormat::kAuto).empty());
}

TEST(LoadCorpus, PlainTextFile) {
  TempDir dir;
  write_file((dir / "ms.txt").string(), kMicrosoftSentence);
  auto docs = load_corpus(dir.path(), CorpusFormat::kAuto);
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].id, "ms");
  ASSERT_EQ(docs[0].sentences.size(), 1u);
  EXPECT_EQ(docs[0].sentences[0].tokens.size(), 16u);
  EXPECT_EQ(docs[0].annotation_level, AnnotationLevel::kTokenized);
}

TEST(LoadCorpus, DuplicateIdsRejected) {
  TempDir dir;
  write_file((dir / "a.json").string(), annotated_doc().dump());
  write_file((dir / "b.json").string(), annotated_doc().dump());
  EXPECT_THROW(load_corpus(dir.path(), CorpusFormat::kAuto), Error);
}

TEST(LoadCorpus, MalformedFileNamesFileAndLine) {
  TempDir dir;
  write_file((dir / "broken.json").string(), "{\n  \"id\": \"x\",\n  \"sentences\": [\n");
  try {
    load_corpus(dir.path(), CorpusFormat::kAuto);
    FAIL() << "expected an error";
  } catch (const Error &e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("broken.json"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line"), std::string::npos) << msg;
  }
}

TEST(LoadCorpus, OffsetMismatchRejected) {
  nlohmann::json j = annotated_doc();
  j["sentences"][0]["tokens"][1]["end"] = 5;
  EXPECT_THROW(document_from_json(j, "doc"), Error);
}

TEST(LoadCorpus, LeafMismatchRejected) {
  nlohmann::json j = annotated_doc();
  j["sentences"][0]["tree"] = "(S (NP (N I)) (VP (V love) (N eggs)) (. .))";
  EXPECT_THROW(document_from_json(j, "doc"), Error);
}

TEST(CorpusProperties, JsonRoundTrip) {
  Document d = document_from_json(annotated_doc(), "doc");
  Document again = document_from_json(document_to_json(d), "doc");
  EXPECT_EQ(d, again);

  TempDir dir;
  save_document(d, dir / "doc-1.json");
  auto loaded = load_corpus(dir.path(), CorpusFormat::kAuto);
  ASSERT_EQ(loaded.size(), 1u);
  EXPECT_EQ(loaded[0], d);

  Document plain = document_from_text("p", "mem://p", kMicrosoftSentence);
  EXPECT_EQ(document_from_json(document_to_json(plain), "p"), plain);
}

TEST(CorpusProperties, OffsetIntegrityOnRandomText) {
  const std::vector<std::string> words = {"Adobe", "(fix)", "11.0.08", "CVE-2014-1127.",
                                          "\"quoted\"", "end.", "Next", "reg.exe,", "why?",
                                          "pAlloc()", "a", "b;"};
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    int n = 1 + int(rng() % 15);
    for (int i = 0; i < n; ++i) {
      text += words[rng() % words.size()];
      text += (rng() % 4 == 0) ? "  " : " ";
    }
    for (const Sentence &s : tokenize(text)) {
      for (const Token &t : s.tokens) {
        ASSERT_LE(t.char_end, text.size());
        EXPECT_EQ(text.substr(t.char_start, t.char_end - t.char_start), t.text) << text;
      }
    }
  }
}

TEST(CorpusProperties, LeafAlignment) {
  Document d = document_from_json(annotated_doc(), "doc");
  for (const Sentence &s : d.sentences) {
    ASSERT_TRUE(s.tree.has_value());
    auto leaves = tree_leaves(*s.tree);
    ASSERT_EQ(leaves.size(), s.tokens.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) EXPECT_EQ(leaves[i]->label, s.tokens[i].text);
  }
}

TEST(EnsureTrees, AddsFallbackOnlyWhereMissing) {
  Document d = document_from_text("p", "", "Adobe ships Acrobat. Oracle ships Java.");
  ensure_trees(d);
  for (const Sentence &s : d.sentences) {
    ASSERT_TRUE(s.tree.has_value());
    EXPECT_TRUE(s.fallback_tree);
  }
  Document parsed = document_from_json(annotated_doc(), "doc");
  ensure_trees(parsed);
  EXPECT_FALSE(parsed.sentences[0].fallback_tree);
}

}  // namespace
}  // namespace secrel
