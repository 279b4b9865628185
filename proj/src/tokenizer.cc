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

#include <cctype>
#include <string_view>
#include <vector>

#include "secrel/corpus.h"

namespace secrel {
namespace {

struct Span {
  std::size_t start;
  std::size_t end;
  int chunk;
};

bool is_opening(char c) {
  return c == '(' || c == '"' || c == '\'' || c == '[' || c == '{' || c == '`';
}

bool is_closing(char c) {
  return c == ')' || c == '"' || c == '\'' || c == ']' || c == '}';
}

bool is_trailing_punct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
      return true;
    default:
      return is_closing(c);
  }
}

bool is_terminal(std::string_view t) { return t == "." || t == "!" || t == "?"; }

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

void split_chunk(std::string_view text, std::size_t s, std::size_t e, int chunk,
                 std::vector<Span> &out) {
  while (s < e && is_opening(text[s]) && e - s > 1) {
    out.push_back({s, s + 1, chunk});
    ++s;
  }
  std::vector<Span> trailing;
  while (e > s + 1) {
    char c = text[e - 1];
    // Keep "()" glued to a function name.
    if (c == ')' && e - s >= 3 && text[e - 2] == '(' && is_ident_char(text[e - 3])) break;
    if (!is_trailing_punct(c)) break;
    trailing.push_back({e - 1, e, chunk});
    --e;
  }
  if (e > s) out.push_back({s, e, chunk});
  for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) out.push_back(*it);
}

bool starts_upper(std::string_view t) {
  return !t.empty() && std::isupper(static_cast<unsigned char>(t[0]));
}

}  // namespace

std::vector<Sentence> tokenize(std::string_view raw_text) {
  std::vector<Span> spans;
  int chunk = 0;
  std::size_t i = 0;
  while (i < raw_text.size()) {
    while (i < raw_text.size() && is_space(raw_text[i])) ++i;
    std::size_t start = i;
    while (i < raw_text.size() && !is_space(raw_text[i])) ++i;
    if (i > start) split_chunk(raw_text, start, i, chunk++, spans);
  }

  auto text_of = [&](std::size_t k) {
    return raw_text.substr(spans[k].start, spans[k].end - spans[k].start);
  };

  std::vector<Sentence> sentences;
  Sentence current;
  auto flush = [&] {
    if (current.tokens.empty()) return;
    current.index = static_cast<int>(sentences.size());
    sentences.push_back(std::move(current));
    current = Sentence{};
  };

  for (std::size_t k = 0; k < spans.size(); ++k) {
    Token token;
    token.index = static_cast<int>(current.tokens.size());
    token.text = std::string(text_of(k));
    token.char_start = spans[k].start;
    token.char_end = spans[k].end;
    current.tokens.push_back(std::move(token));

    if (!is_terminal(text_of(k))) continue;
    // Absorb closing quotes/brackets glued to the terminal.
    std::size_t last = k;
    while (last + 1 < spans.size() && spans[last + 1].chunk == spans[k].chunk &&
           text_of(last + 1).size() == 1 && is_closing(text_of(last + 1)[0])) {
      ++last;
    }
    bool chunk_ends = last + 1 == spans.size() || spans[last + 1].chunk != spans[k].chunk;
    if (!chunk_ends) continue;
    bool boundary = false;
    if (last + 1 == spans.size()) {
      boundary = true;
    } else if (starts_upper(text_of(last + 1))) {
      boundary = true;
    } else if (text_of(last + 1).size() == 1 && is_opening(text_of(last + 1)[0]) &&
               last + 2 < spans.size() && starts_upper(text_of(last + 2))) {
      boundary = true;
    }
    if (!boundary) continue;
    for (std::size_t m = k + 1; m <= last; ++m) {
      Token closing;
      closing.index = static_cast<int>(current.tokens.size());
      closing.text = std::string(text_of(m));
      closing.char_start = spans[m].start;
      closing.char_end = spans[m].end;
      current.tokens.push_back(std::move(closing));
    }
    k = last;
    flush();
  }
  flush();
  return sentences;
}

}  // namespace secrel
