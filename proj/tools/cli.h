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

#ifndef SECREL_TOOLS_CLI_H_
#define SECREL_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace secrel {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;        // bad flags or unreadable / invalid input
inline constexpr int kExitEnvironment = 3;  // e.g. the bind address is taken

// Entry point of the secrel tool. args excludes the program name. The
// interactive oracle reads answers from `in`.
int run_cli(const std::vector<std::string> &args, std::istream &in, std::ostream &out,
            std::ostream &err);

}  // namespace secrel

#endif  // SECREL_TOOLS_CLI_H_
