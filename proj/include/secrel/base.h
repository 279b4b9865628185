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

#ifndef SECREL_BASE_H_
#define SECREL_BASE_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace secrel {

// All recoverable failures (malformed input, violated preconditions) are
// reported with this exception type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ASCII case folding. Non-ASCII bytes pass through unchanged.
std::string casefold(std::string_view s);

std::string join(const std::vector<std::string> &parts, std::string_view sep);

// Splits on runs of ASCII whitespace.
std::vector<std::string> split_whitespace(std::string_view s);

// 1-based line number of a byte offset in text.
int line_of_offset(std::string_view text, std::size_t offset);

std::string read_file(const std::string &path);

void write_file(const std::string &path, std::string_view contents);

}  // namespace secrel

#endif  // SECREL_BASE_H_
