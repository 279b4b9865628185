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

#ifndef SECREL_TESTS_TEST_UTIL_H_
#define SECREL_TESTS_TEST_UTIL_H_

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "secrel/corpus.h"
#include "secrel/entity.h"

namespace secrel::testing {

inline std::filesystem::path source_dir() { return SECREL_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "data"; }
inline std::filesystem::path fixture_dir() { return source_dir() / "tests" / "fixtures"; }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("secrel-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Sentence from (word, tag) pairs; offsets assume single-space joining.
inline Sentence make_tagged_sentence(
    const std::vector<std::pair<std::string, std::string>> &words) {
  Sentence s;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    Token t;
    t.index = static_cast<int>(i);
    t.text = words[i].first;
    t.pos = words[i].second;
    t.char_start = pos;
    t.char_end = pos + t.text.size();
    pos = t.char_end + 1;
    s.tokens.push_back(t);
  }
  return s;
}

inline Sentence make_sentence(const std::vector<std::string> &words) {
  std::vector<std::pair<std::string, std::string>> tagged;
  for (const std::string &w : words) tagged.emplace_back(w, std::string(kUntaggedPos));
  return make_tagged_sentence(tagged);
}

// Gazetteer set from "canonical<TAB>alias" TSV text per type.
inline GazetteerSet make_gazetteers(const std::vector<std::pair<EntityType, std::string>> &tsv) {
  GazetteerSet set;
  for (const auto &[type, text] : tsv) {
    set.gazetteers.push_back(parse_gazetteer(text, type, std::string(entity_type_name(type))));
  }
  return set;
}

inline EntityMention mention(EntityType type, int first, int last, std::string canonical,
                             int sentence_index = 0, std::string doc_id = "") {
  EntityMention m;
  m.doc_id = std::move(doc_id);
  m.sentence_index = sentence_index;
  m.span = {first, last};
  m.type = type;
  m.canonical = std::move(canonical);
  return m;
}

}  // namespace secrel::testing

#endif  // SECREL_TESTS_TEST_UTIL_H_
