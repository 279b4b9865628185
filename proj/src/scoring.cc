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

#include "secrel/scoring.h"

#include <algorithm>
#include <cmath>

#include "secrel/base.h"

namespace secrel {
namespace {

double log_in(double x, double base) {
  return base == kNaturalLog ? std::log(x) : std::log(x) / std::log(base);
}

bool tied(double a, double b) {
  return std::abs(a - b) <= kScoreTieTolerance * std::max(std::abs(a), std::abs(b));
}

void check_fraction(double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw Error("fraction must lie in [0, 1]");
}

}  // namespace

std::string_view answer_name(Answer answer) {
  switch (answer) {
    case Answer::kYes: return "yes";
    case Answer::kNo: return "no";
    case Answer::kDontKnow: return "dont_know";
  }
  return "dont_know";
}

std::optional<Answer> parse_answer(std::string_view name) {
  if (name == "yes") return Answer::kYes;
  if (name == "no") return Answer::kNo;
  if (name == "dont_know") return Answer::kDontKnow;
  return std::nullopt;
}

double score_relation(std::span<const int> support_counts, double log_base) {
  if (support_counts.empty()) {
    throw Error("score_relation: a candidate needs at least one nominating pattern");
  }
  double sum = 0.0;
  for (int f : support_counts) {
    if (f < 0) throw Error("score_relation: counts must be non-negative");
    sum += log_in(static_cast<double>(f) + 1.0, log_base);
  }
  return sum / static_cast<double>(support_counts.size());
}

double score_pattern(int known_matches, int occurrences, double log_base) {
  if (known_matches < 1) throw Error("score_pattern: pattern matched no known relation");
  if (known_matches > occurrences) {
    throw Error("score_pattern: known matches exceed occurrences");
  }
  const double m = known_matches;
  return m * log_in(m, log_base) / static_cast<double>(occurrences);
}

double apply_oracle_override(double score, Answer answer) {
  switch (answer) {
    case Answer::kYes: return kYesScore;
    case Answer::kNo: return kNoScore;
    case Answer::kDontKnow: return score;
  }
  return score;
}

std::vector<ScoredCandidate> rank_candidates(std::span<const ScoredCandidate> candidates) {
  std::vector<ScoredCandidate> ranked(candidates.begin(), candidates.end());
  std::sort(ranked.begin(), ranked.end(), [](const ScoredCandidate &a, const ScoredCandidate &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.key < b.key;
  });
  // Re-sort runs of near-equal scores by key. Runs are measured from their
  // first (highest) member so they cannot chain.
  std::size_t start = 0;
  while (start < ranked.size()) {
    std::size_t end = start + 1;
    while (end < ranked.size() && tied(ranked[start].score, ranked[end].score)) ++end;
    std::sort(ranked.begin() + start, ranked.begin() + end,
              [](const ScoredCandidate &a, const ScoredCandidate &b) { return a.key < b.key; });
    start = end;
  }
  return ranked;
}

std::size_t fraction_count(double fraction, std::size_t n) {
  check_fraction(fraction);
  if (fraction == 0.0 || n == 0) return 0;
  double k = std::ceil(fraction * static_cast<double>(n) - 1e-9);
  return std::min(n, static_cast<std::size_t>(std::max(k, 0.0)));
}

std::vector<ScoredCandidate> select_top_fraction(std::span<const ScoredCandidate> candidates,
                                                 double fraction) {
  const std::size_t k = fraction_count(fraction, candidates.size());
  std::vector<ScoredCandidate> accepted;
  for (ScoredCandidate &c : rank_candidates(candidates)) {
    if (accepted.size() == k) break;
    if (c.score < 0) continue;
    accepted.push_back(std::move(c));
  }
  return accepted;
}

std::vector<ScoredCandidate> select_queries(std::span<const ScoredCandidate> candidates,
                                            double fraction) {
  const std::size_t k = fraction_count(fraction, candidates.size());
  std::vector<ScoredCandidate> ranked = rank_candidates(candidates);
  ranked.resize(k);
  return ranked;
}

}  // namespace secrel
