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

#ifndef SECREL_CORPUS_H_
#define SECREL_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "secrel/base.h"

namespace secrel {

// Part-of-speech placeholder for text that has not been tagged.
inline constexpr std::string_view kUntaggedPos = "X";

struct Token {
  int index = 0;
  std::string text;
  std::string pos{kUntaggedPos};
  std::size_t char_start = 0;  // byte offsets into Document::raw_text
  std::size_t char_end = 0;

  bool operator==(const Token &) const = default;
};

// Constituency tree. Leaves carry the index of the token they cover and use
// the surface word as their label; every leaf is the only child of a
// preterminal labelled with the token's part of speech.
struct ParseTree {
  std::string label;
  std::vector<ParseTree> children;
  std::optional<int> leaf_token;

  bool is_leaf() const { return leaf_token.has_value(); }
  bool is_preterminal() const {
    return children.size() == 1 && children[0].is_leaf();
  }

  bool operator==(const ParseTree &) const = default;
};

struct Sentence {
  int index = 0;
  std::vector<Token> tokens;
  std::optional<ParseTree> tree;
  // Set when tree was synthesized by flat_tree() rather than read from
  // annotations. Not serialized.
  bool fallback_tree = false;

  bool operator==(const Sentence &) const = default;
};

enum class AnnotationLevel { kRaw, kTokenized, kPosTagged, kParsed };

std::string_view annotation_level_name(AnnotationLevel level);

struct Document {
  std::string id;
  std::string source_uri;
  std::string raw_text;
  std::vector<Sentence> sentences;
  AnnotationLevel annotation_level = AnnotationLevel::kRaw;
  std::optional<bool> relevance_label;

  bool operator==(const Document &) const = default;
};

// Bracketed-tree syntax error; offset is the byte position in the input.
class ParseError : public Error {
 public:
  ParseError(const std::string &what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Rule tokenizer. Splits on whitespace, detaches leading opening brackets and
// quotes and trailing punctuation (keeping internal dots as in "11.0.08" or
// "reg.exe", and a trailing "()" on identifiers as in "pAlloc()"). A sentence
// ends at ".", "!" or "?" followed by whitespace and a capitalized token, or
// by the end of the text. Every token gets the placeholder tag "X".
std::vector<Sentence> tokenize(std::string_view raw_text);

// Reads a Penn-Treebank style tree such as "(S (NP (N I)) (VP (V like)))".
// Leaves are numbered in reading order. An unlabelled wrapper around a single
// tree ("( (S ...) )") is removed.
ParseTree parse_bracketed_tree(std::string_view s);

std::string to_bracketed(const ParseTree &tree);

// Root "S" over one preterminal per token, labelled with the token's tag.
ParseTree flat_tree(const Sentence &sentence);

// Leaves in reading order.
std::vector<const ParseTree *> tree_leaves(const ParseTree &tree);

// Node labels along the unique path between the preterminals over two
// tokens, both preterminals included. Throws if either token is not a leaf.
std::vector<std::string> tree_path(const ParseTree &tree, int from_token,
                                   int to_token);

// Aligns tree leaves with the sentence tokens, fills untagged token tags from
// the preterminals and checks they agree otherwise.
void attach_tree(Sentence &sentence, ParseTree tree);

// Builds a Document from raw text with the rule tokenizer.
Document document_from_text(std::string id, std::string source_uri,
                            std::string raw_text);

// Gives every sentence without a tree a flat fallback tree.
void ensure_trees(Document &document);

// annotated-json schema. `origin` names the source in error messages.
// annotation_level is parsed when every sentence has a tree, pos_tagged when
// every token has a tag, tokenized otherwise. A document without sentences is
// run through tokenize().
Document document_from_json(const nlohmann::json &j, const std::string &origin);
nlohmann::json document_to_json(const Document &document);

enum class CorpusFormat { kAnnotatedJson, kPlainText, kAuto };

// Loads a single file or every regular file of a directory (sorted by file
// name). kAuto picks the format by extension: ".json" is annotated-json,
// ".txt" is plain text, anything else is skipped.
std::vector<Document> load_corpus(const std::filesystem::path &path,
                                  CorpusFormat format);

void save_document(const Document &document, const std::filesystem::path &path);

}  // namespace secrel

#endif  // SECREL_CORPUS_H_
