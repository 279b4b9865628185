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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "secrel/base.h"

namespace secrel {
namespace {

std::set<std::string> keys(const std::vector<ScoredCandidate> &list) {
  std::set<std::string> out;
  for (const auto &c : list) out.insert(c.key);
  return out;
}

std::vector<ScoredCandidate> one_to_ten() {
  std::vector<ScoredCandidate> out;
  for (int i = 1; i <= 10; ++i) out.push_back({"c" + std::to_string(i), double(i)});
  return out;
}

TEST(ScoreRelation, Examples) {
  std::vector<int> f0 = {0};
  EXPECT_EQ(score_relation(f0), 0.0);
  std::vector<int> f37 = {3, 7};
  EXPECT_NEAR(score_relation(f37), 1.7329, 1e-4);
  EXPECT_NEAR(score_relation(f37), (std::log(4.0) + std::log(8.0)) / 2, 1e-15);
  std::vector<int> f111 = {1, 1, 1};
  EXPECT_NEAR(score_relation(f111), 0.6931, 1e-4);
}

TEST(ScoreRelation, RejectsEmptyAndNegative) {
  std::vector<int> none;
  EXPECT_THROW(score_relation(none), Error);
  std::vector<int> neg = {1, -1};
  EXPECT_THROW(score_relation(neg), Error);
}

TEST(ScorePattern, Examples) {
  EXPECT_EQ(score_pattern(1, 5), 0.0);
  EXPECT_NEAR(score_pattern(4, 10), 0.5545, 1e-4);
  EXPECT_NEAR(score_pattern(4, 4), std::log(4.0), 1e-15);
  EXPECT_NEAR(score_pattern(4, 4), 1.3863, 1e-4);
}

TEST(ScorePattern, RejectsOutOfRange) {
  EXPECT_THROW(score_pattern(0, 3), Error);
  EXPECT_THROW(score_pattern(4, 3), Error);
}

TEST(OracleOverride, Examples) {
  EXPECT_EQ(apply_oracle_override(0.55, Answer::kYes), 1000.0);
  EXPECT_EQ(apply_oracle_override(0.55, Answer::kNo), -1.0);
  EXPECT_EQ(apply_oracle_override(0.55, Answer::kDontKnow), 0.55);
}

TEST(SelectTopFraction, Examples) {
  auto pool = one_to_ten();
  auto accepted = select_top_fraction(pool, 0.8);
  std::set<std::string> want;
  for (int i = 3; i <= 10; ++i) want.insert("c" + std::to_string(i));
  EXPECT_EQ(keys(accepted), want);

  std::vector<ScoredCandidate> rejected = {{"a", -1}, {"b", -1}, {"c", -1}};
  EXPECT_TRUE(select_top_fraction(rejected, 0.8).empty());

  std::vector<ScoredCandidate> single = {{"only", 0.3}};
  EXPECT_EQ(select_top_fraction(single, 0.8).size(), 1u);
}

TEST(SelectQueries, Examples) {
  std::vector<ScoredCandidate> hundred, ten;
  for (int i = 0; i < 100; ++i) hundred.push_back({"h" + std::to_string(i), i * 0.1});
  for (int i = 0; i < 10; ++i) ten.push_back({"t" + std::to_string(i), i * 0.1});
  EXPECT_EQ(select_queries(hundred, 0.02).size(), 2u);
  EXPECT_TRUE(select_queries(hundred, 0.0).empty());
  EXPECT_EQ(select_queries(ten, 0.02).size(), 1u);
}

TEST(FractionCount, CeilingAtSeveralSizes) {
  EXPECT_EQ(fraction_count(0.8, 1), 1u);
  EXPECT_EQ(fraction_count(0.8, 10), 8u);
  EXPECT_EQ(fraction_count(0.8, 100), 80u);
  EXPECT_EQ(fraction_count(0.02, 1), 1u);
  EXPECT_EQ(fraction_count(0.02, 10), 1u);
  EXPECT_EQ(fraction_count(0.02, 100), 2u);
  EXPECT_EQ(fraction_count(0.0, 100), 0u);
  EXPECT_EQ(fraction_count(1.0, 7), 7u);
}

TEST(RankCandidates, TiesOrderedByKey) {
  std::vector<ScoredCandidate> pool = {{"b", 1.0}, {"a", 1.0}, {"c", 2.0}};
  auto ranked = rank_candidates(pool);
  ASSERT_EQ(ranked.size(), 3u);
  EXPECT_EQ(ranked[0].key, "c");
  EXPECT_EQ(ranked[1].key, "a");
  EXPECT_EQ(ranked[2].key, "b");
}

TEST(ScoringProperties, RelationScoreStrictlyIncreasesInEachCount) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(1, 6), val(0, 20);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> f(len(rng));
    for (int &x : f) x = val(rng);
    double before = score_relation(f);
    std::size_t i = rng() % f.size();
    f[i] += 1;
    EXPECT_GT(score_relation(f), before);
  }
}

TEST(ScoringProperties, PatternScoreMonotone) {
  for (int n = 2; n <= 40; ++n) {
    for (int m = 1; m < n; ++m) EXPECT_GT(score_pattern(m + 1, n), score_pattern(m, n));
    for (int m = 2; m <= n; ++m) EXPECT_LT(score_pattern(m, n + 1), score_pattern(m, n));
  }
}

TEST(ScoringProperties, LogBaseRescalesByConstant) {
  std::vector<int> f = {3, 7, 2};
  double ratio = score_relation(f, 2.0) / score_relation(f);
  EXPECT_NEAR(ratio, 1.0 / std::log(2.0), 1e-12);
  EXPECT_NEAR(score_pattern(5, 9, 2.0) / score_pattern(5, 9), ratio, 1e-12);
}

TEST(ScoringProperties, SelectionSizeIsCeilingCappedByNonNegatives) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + rng() % 30;
    std::vector<ScoredCandidate> pool;
    std::size_t non_negative = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = unit(rng) < 0.3 ? -1.0 : unit(rng) * 3;
      if (s >= 0) ++non_negative;
      pool.push_back({"k" + std::to_string(i), s});
    }
    double fraction = unit(rng);
    std::size_t want = std::min<std::size_t>(
        static_cast<std::size_t>(std::ceil(fraction * double(n) - 1e-9)), non_negative);
    EXPECT_EQ(select_top_fraction(pool, fraction).size(), want);
  }
}

TEST(ScoringProperties, OverrideDominance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng() % 20;
    std::vector<ScoredCandidate> pool;
    for (std::size_t i = 0; i < n; ++i) pool.push_back({"k" + std::to_string(i), unit(rng)});
    std::size_t yes = rng() % n, no = (yes + 1) % n;
    pool[yes].score = apply_oracle_override(pool[yes].score, Answer::kYes);
    pool[no].score = apply_oracle_override(pool[no].score, Answer::kNo);
    for (double fraction : {0.01, 0.5, 1.0}) {
      auto accepted = keys(select_top_fraction(pool, fraction));
      EXPECT_TRUE(accepted.count(pool[yes].key));
      EXPECT_FALSE(accepted.count(pool[no].key));
    }
  }
}

// Brute force: the accepted set is the subset S of non-negative candidates
// with |S| = min(k, non-negatives) such that every member outranks every
// non-member (score, then key).
TEST(ScoringProperties, MatchesSubsetEnumeration) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> score(-1, 4);
  for (int trial = 0; trial < 400; ++trial) {
    std::size_t n = 1 + rng() % 6;
    std::vector<ScoredCandidate> pool;
    for (std::size_t i = 0; i < n; ++i) pool.push_back({std::string(1, char('a' + i)), double(score(rng))});
    std::shuffle(pool.begin(), pool.end(), rng);
    double fraction = double(rng() % 11) / 10.0;
    std::size_t k = static_cast<std::size_t>(std::ceil(fraction * double(n) - 1e-9));
    auto outranks = [](const ScoredCandidate &x, const ScoredCandidate &y) {
      return x.score > y.score || (x.score == y.score && x.key < y.key);
    };
    std::set<std::string> expected;
    bool found = false;
    for (unsigned mask = 0; mask < (1u << n) && !found; ++mask) {
      std::vector<ScoredCandidate> in, out;
      for (std::size_t i = 0; i < n; ++i) (mask >> i & 1 ? in : out).push_back(pool[i]);
      bool ok = true;
      for (const auto &a : in)
        for (const auto &b : out) ok = ok && outranks(a, b);
      if (ok && in.size() == std::min<std::size_t>(k, n)) {
        for (const auto &a : in)
          if (a.score >= 0) expected.insert(a.key);
        found = true;
      }
    }
    ASSERT_TRUE(found);
    EXPECT_EQ(keys(select_top_fraction(pool, fraction)), expected);
  }
}

TEST(AnswerNames, RoundTrip) {
  for (Answer a : {Answer::kYes, Answer::kNo, Answer::kDontKnow}) {
    EXPECT_EQ(parse_answer(answer_name(a)), a);
  }
  EXPECT_FALSE(parse_answer("maybe").has_value());
}

}  // namespace
}  // namespace secrel
