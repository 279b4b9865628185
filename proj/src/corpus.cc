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

#include <algorithm>
#include <map>
#include <string>
#include <utility>

namespace secrel {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string &origin, const std::string &where,
                       const std::string &what) {
  throw Error(origin + ": " + where + ": " + what);
}

const json &require(const json &obj, const char *key, const std::string &origin,
                    const std::string &where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(origin, where, std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const json &obj, const char *key, const std::string &origin,
                           const std::string &where) {
  const json &v = require(obj, key, origin, where);
  if (!v.is_string()) fail(origin, where, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::size_t require_offset(const json &obj, const char *key, const std::string &origin,
                           const std::string &where) {
  const json &v = require(obj, key, origin, where);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    fail(origin, where, std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

bool is_hidden(const std::filesystem::path &p) {
  std::string name = p.filename().string();
  return !name.empty() && name[0] == '.';
}

CorpusFormat format_for(const std::filesystem::path &p, CorpusFormat requested) {
  if (requested != CorpusFormat::kAuto) return requested;
  std::string ext = casefold(p.extension().string());
  if (ext == ".json") return CorpusFormat::kAnnotatedJson;
  if (ext == ".txt") return CorpusFormat::kPlainText;
  return CorpusFormat::kAuto;
}

std::vector<Document> load_file(const std::filesystem::path &path, CorpusFormat format) {
  std::string origin = path.string();
  std::string contents = read_file(origin);
  std::vector<Document> docs;
  if (format == CorpusFormat::kPlainText) {
    docs.push_back(document_from_text(path.stem().string(), origin, std::move(contents)));
    return docs;
  }
  json j;
  try {
    j = json::parse(contents);
  } catch (const json::parse_error &e) {
    throw Error(origin + ":" + std::to_string(line_of_offset(contents, e.byte)) +
                ": malformed JSON: " + e.what());
  }
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      docs.push_back(document_from_json(j[i], origin + "[" + std::to_string(i) + "]"));
    }
  } else {
    docs.push_back(document_from_json(j, origin));
  }
  return docs;
}

}  // namespace

std::string_view annotation_level_name(AnnotationLevel level) {
  switch (level) {
    case AnnotationLevel::kRaw: return "raw";
    case AnnotationLevel::kTokenized: return "tokenized";
    case AnnotationLevel::kPosTagged: return "pos_tagged";
    case AnnotationLevel::kParsed: return "parsed";
  }
  return "raw";
}

Document document_from_text(std::string id, std::string source_uri, std::string raw_text) {
  Document doc;
  doc.id = std::move(id);
  doc.source_uri = std::move(source_uri);
  doc.raw_text = std::move(raw_text);
  doc.sentences = tokenize(doc.raw_text);
  doc.annotation_level =
      doc.sentences.empty() ? AnnotationLevel::kRaw : AnnotationLevel::kTokenized;
  return doc;
}

void ensure_trees(Document &document) {
  for (Sentence &sentence : document.sentences) {
    if (sentence.tree || sentence.tokens.empty()) continue;
    sentence.tree = flat_tree(sentence);
    sentence.fallback_tree = true;
  }
}

Document document_from_json(const json &j, const std::string &origin) {
  if (!j.is_object()) fail(origin, "document", "expected a JSON object");
  Document doc;
  doc.id = require_string(j, "id", origin, "document");
  if (doc.id.empty()) fail(origin, "id", "must be non-empty");
  if (auto it = j.find("source_uri"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) fail(origin, "source_uri", "must be a string");
    doc.source_uri = it->get<std::string>();
  }
  doc.raw_text = require_string(j, "raw_text", origin, "document");
  if (auto it = j.find("relevance_label"); it != j.end() && !it->is_null()) {
    if (!it->is_boolean()) fail(origin, "relevance_label", "must be true, false or null");
    doc.relevance_label = it->get<bool>();
  }

  auto sentences_it = j.find("sentences");
  if (sentences_it == j.end() || sentences_it->is_null() || sentences_it->empty()) {
    if (sentences_it != j.end() && !sentences_it->is_null() && !sentences_it->is_array()) {
      fail(origin, "sentences", "must be an array");
    }
    Document tokenized = document_from_text(doc.id, doc.source_uri, doc.raw_text);
    doc.sentences = std::move(tokenized.sentences);
    doc.annotation_level = tokenized.annotation_level;
    return doc;
  }
  if (!sentences_it->is_array()) fail(origin, "sentences", "must be an array");

  bool all_tagged = true;
  bool all_trees = true;
  std::size_t previous_end = 0;
  for (std::size_t si = 0; si < sentences_it->size(); ++si) {
    const json &js = (*sentences_it)[si];
    std::string where = "sentences[" + std::to_string(si) + "]";
    if (!js.is_object()) fail(origin, where, "expected an object");
    const json &jtokens = require(js, "tokens", origin, where);
    if (!jtokens.is_array() || jtokens.empty()) {
      fail(origin, where, "tokens must be a non-empty array");
    }
    Sentence sentence;
    sentence.index = static_cast<int>(si);
    for (std::size_t ti = 0; ti < jtokens.size(); ++ti) {
      const json &jt = jtokens[ti];
      std::string twhere = where + ".tokens[" + std::to_string(ti) + "]";
      if (!jt.is_object()) fail(origin, twhere, "expected an object");
      Token token;
      token.index = static_cast<int>(ti);
      token.text = require_string(jt, "text", origin, twhere);
      token.char_start = require_offset(jt, "start", origin, twhere);
      token.char_end = require_offset(jt, "end", origin, twhere);
      auto pos = jt.find("pos");
      if (pos != jt.end() && pos->is_string() && !pos->get<std::string>().empty()) {
        token.pos = pos->get<std::string>();
      } else if (pos != jt.end() && !pos->is_null() && !pos->is_string()) {
        fail(origin, twhere, "pos must be a string or null");
      } else {
        all_tagged = false;
      }
      if (token.char_start >= token.char_end) fail(origin, twhere, "start must be < end");
      if (token.char_end > doc.raw_text.size()) {
        fail(origin, twhere, "end lies beyond raw_text");
      }
      if (token.char_start < previous_end) {
        fail(origin, twhere, "tokens overlap or are out of order");
      }
      if (doc.raw_text.compare(token.char_start, token.char_end - token.char_start,
                               token.text) != 0) {
        fail(origin, twhere, "raw_text[start..end] differs from token text '" + token.text + "'");
      }
      previous_end = token.char_end;
      sentence.tokens.push_back(std::move(token));
    }
    auto tree_it = js.find("tree");
    if (tree_it != js.end() && !tree_it->is_null()) {
      if (!tree_it->is_string()) fail(origin, where, "tree must be a string or null");
      try {
        attach_tree(sentence, parse_bracketed_tree(tree_it->get<std::string>()));
      } catch (const Error &e) {
        fail(origin, where + ".tree", e.what());
      }
    } else {
      all_trees = false;
    }
    doc.sentences.push_back(std::move(sentence));
  }
  if (all_trees) {
    doc.annotation_level = AnnotationLevel::kParsed;
  } else if (all_tagged) {
    doc.annotation_level = AnnotationLevel::kPosTagged;
  } else {
    doc.annotation_level = AnnotationLevel::kTokenized;
  }
  return doc;
}

json document_to_json(const Document &document) {
  bool tagged = document.annotation_level >= AnnotationLevel::kPosTagged;
  json sentences = json::array();
  for (const Sentence &sentence : document.sentences) {
    json tokens = json::array();
    for (const Token &token : sentence.tokens) {
      tokens.push_back({{"text", token.text},
                        {"pos", tagged ? json(token.pos) : json(nullptr)},
                        {"start", token.char_start},
                        {"end", token.char_end}});
    }
    json tree = nullptr;
    if (sentence.tree && !sentence.fallback_tree) tree = to_bracketed(*sentence.tree);
    sentences.push_back({{"tokens", std::move(tokens)}, {"tree", std::move(tree)}});
  }
  return {{"id", document.id},
          {"source_uri", document.source_uri},
          {"raw_text", document.raw_text},
          {"sentences", std::move(sentences)},
          {"relevance_label", document.relevance_label ? json(*document.relevance_label)
                                                       : json(nullptr)}};
}

std::vector<Document> load_corpus(const std::filesystem::path &path, CorpusFormat format) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) throw Error(path.string() + ": no such file or directory");

  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto &entry : fs::directory_iterator(path)) {
      if (!entry.is_regular_file() || is_hidden(entry.path())) continue;
      if (format_for(entry.path(), format) == CorpusFormat::kAuto) continue;
      files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(), [](const fs::path &a, const fs::path &b) {
      return a.filename().string() < b.filename().string();
    });
  } else {
    if (format_for(path, format) == CorpusFormat::kAuto) {
      throw Error(path.string() + ": cannot infer corpus format from extension");
    }
    files.push_back(path);
  }

  std::vector<Document> docs;
  std::map<std::string, std::string> seen;  // id -> origin
  for (const fs::path &file : files) {
    for (Document &doc : load_file(file, format_for(file, format))) {
      auto [it, inserted] = seen.emplace(doc.id, file.string());
      if (!inserted) {
        throw Error(file.string() + ": duplicate document id '" + doc.id +
                    "' (first seen in " + it->second + ")");
      }
      docs.push_back(std::move(doc));
    }
  }
  return docs;
}

void save_document(const Document &document, const std::filesystem::path &path) {
  write_file(path.string(), document_to_json(document).dump(2) + "\n");
}

}  // namespace secrel
