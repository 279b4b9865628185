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

#ifndef SECREL_SCORING_H_
#define SECREL_SCORING_H_

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace secrel {

enum class Answer { kYes, kNo, kDontKnow };

std::string_view answer_name(Answer answer);
std::optional<Answer> parse_answer(std::string_view name);

inline constexpr double kNaturalLog = std::numbers::e;

// Sum of log(f_i + 1) over the n patterns that nominated a relation,
// divided by n. f_i is the number of known relations pattern i identified.
// Throws on an empty support set or a negative count.
double score_relation(std::span<const int> support_counts, double log_base = kNaturalLog);

// m * log(m) / N for a pattern that matched m distinct known relations among
// N distinct occurrences. Requires 1 <= m <= N.
double score_pattern(int known_matches, int occurrences, double log_base = kNaturalLog);

inline constexpr double kYesScore = 1000.0;
inline constexpr double kNoScore = -1.0;

// yes -> 1000, no -> -1, don't know -> unchanged.
double apply_oracle_override(double score, Answer answer);

struct ScoredCandidate {
  std::string key;
  double score = 0.0;

  bool operator==(const ScoredCandidate &) const = default;
};

// Scores closer than this (relative) are treated as tied and ordered by key.
// Keeps rankings identical when every score is rescaled by one constant.
inline constexpr double kScoreTieTolerance = 1e-9;

// Highest score first; ties by ascending key.
std::vector<ScoredCandidate> rank_candidates(std::span<const ScoredCandidate> candidates);

// ceil(fraction * n), guarded against representation error in fraction.
std::size_t fraction_count(double fraction, std::size_t n);

// The ceil(fraction * n) best candidates, minus any with a negative score.
std::vector<ScoredCandidate> select_top_fraction(std::span<const ScoredCandidate> candidates,
                                                 double fraction);

// The ceil(fraction * n) best candidates, negative scores included.
std::vector<ScoredCandidate> select_queries(std::span<const ScoredCandidate> candidates,
                                            double fraction);

}  // namespace secrel

#endif  // SECREL_SCORING_H_
