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

#ifndef SECREL_EVALGEN_H_
#define SECREL_EVALGEN_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "secrel/corpus.h"
#include "secrel/entity.h"
#include "secrel/pattern.h"

namespace secrel {

struct SynthSpec {
  int num_docs = 0;
  // Sentence slots per document; each slot holds one planted relation, or
  // a noise sentence with probability noise_sentence_rate.
  int relations_per_doc = 0;
  double noise_sentence_rate = 0.0;
  std::string template_set = "default";
  std::uint64_t rng_seed = 0;

  void validate() const;
};

// A planted relation together with the document it was planted in.
struct GoldRelation {
  RelationInstance instance;
  std::string doc_id;

  bool operator==(const GoldRelation &) const = default;
};

struct SynthCorpus {
  std::vector<Document> documents;
  std::vector<GoldRelation> gold;
};

// Deterministic in rng_seed. Planted relations use distinct entities drawn
// without replacement; running out raises an error naming the entity type.
SynthCorpus generate_corpus(const SynthSpec &spec, const GazetteerSet &gazetteers);

// Names of the template sets generate_corpus accepts.
std::vector<std::string> template_sets();

// One between-word seed pattern per relation template of the set.
SeedSet template_seeds(const std::string &template_set);

struct EvalRow {
  std::string relation;
  int tp = 0;
  int fp = 0;

  // Undefined when nothing was found.
  std::optional<double> precision() const;
  bool operator==(const EvalRow &) const = default;
};

struct RecallCheck {
  int found = 0;
  int total = 0;

  std::optional<double> recall() const;
  bool operator==(const RecallCheck &) const = default;
};

struct EvalReport {
  std::vector<EvalRow> rows;  // relation-table order
  EvalRow totals;
  std::optional<RecallCheck> recall;

  bool operator==(const EvalReport &) const = default;
};

// Instances are compared by relation key. Recall is computed over the gold
// relations planted in labeled_docs, when given.
EvalReport evaluate(std::span<const RelationInstance> extracted, std::span<const GoldRelation> gold,
                    const std::set<std::string> *labeled_docs = nullptr);

// Builds a report from per-relation (TP, FP) counts given in table order.
EvalReport report_from_counts(std::span<const std::pair<int, int>> counts,
                              std::optional<RecallCheck> recall = std::nullopt);

// Aligned text table; two decimals, "-" for undefined values.
std::string render_report(const EvalReport &report);
nlohmann::json report_to_json(const EvalReport &report);

// Gold files use the relation-list format with an optional "doc_id" field.
std::vector<GoldRelation> load_gold(const std::filesystem::path &path);
void save_gold(std::span<const GoldRelation> gold, const std::filesystem::path &path);

}  // namespace secrel

#endif  // SECREL_EVALGEN_H_
