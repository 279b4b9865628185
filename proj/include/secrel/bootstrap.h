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

#ifndef SECREL_BOOTSTRAP_H_
#define SECREL_BOOTSTRAP_H_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "secrel/corpus.h"
#include "secrel/entity.h"
#include "secrel/oracle.h"
#include "secrel/pattern.h"
#include "secrel/relevance.h"
#include "secrel/scoring.h"

namespace secrel {

// Raised for invalid configuration values; field() names the offender.
class ConfigError : public Error {
 public:
  ConfigError(const std::string &field, const std::string &what)
      : Error(field + ": " + what), field_(field) {}
  const std::string &field() const { return field_; }

 private:
  std::string field_;
};

struct BootstrapConfig {
  double accept_fraction = 0.80;
  double query_fraction = 0.02;
  int max_iterations = 10;
  int window_cap = 5;
  int between_cap = 12;
  OracleMode oracle_mode = OracleMode::kAutoDontKnow;
  double relevance_threshold = 0.5;
  // Words in the between-span that decide an is_version_of / not_version_of
  // conflict for not_version_of when nobody answers.
  std::vector<std::string> negation_cues = {"not",   "except", "prior",
                                            "earlier", "before", "excluding"};
  // Flat fallback trees say nothing about structure; by default they are not
  // used to learn parse-path patterns.
  bool paths_from_fallback_trees = false;

  void validate() const;
  bool operator==(const BootstrapConfig &) const = default;
};

nlohmann::json config_to_json(const BootstrapConfig &config);
// Missing fields keep their defaults. Throws ConfigError.
BootstrapConfig config_from_json(const nlohmann::json &j);
BootstrapConfig load_config(const std::filesystem::path &path);

struct CandidateRecord {
  std::string key;
  double score = 0.0;  // after any oracle override
  std::optional<Answer> answer;
  bool queried = false;
  bool accepted = false;

  bool operator==(const CandidateRecord &) const = default;
};

struct ConflictRecord {
  std::string key;             // the contested relation candidate
  std::string rival_relation;  // the relation it competed with
  std::string chosen;          // relation name that won
  std::string reason;          // "oracle", "rival_seed", "cue", "score" or "tie"

  bool operator==(const ConflictRecord &) const = default;
};

struct IterationRecord {
  int iteration = 0;
  std::vector<CandidateRecord> patterns;
  std::vector<CandidateRecord> relations;
  std::vector<ConflictRecord> conflicts;
  int promotions = 0;

  std::size_t accepted_relations() const;
  bool operator==(const IterationRecord &) const = default;
};

struct BootstrapState {
  std::string relation;
  int iteration = 0;
  std::map<std::string, RelationInstance> known_relations;  // by key()
  std::map<std::string, Pattern> known_patterns;            // by key()
  std::vector<EntityMention> promoted_mentions;
  // Standing yes/no answers by candidate key; applied on every cycle.
  std::map<std::string, Answer> answers;
  std::vector<IterationRecord> history;

  bool operator==(const BootstrapState &) const = default;
};

BootstrapState initial_state(const RelationType &relation, const RelationSeeds &seeds);

// Documents with their tagged mentions, mentions[d][s] as in MentionTable.
struct TaggedCorpus {
  std::vector<Document> documents;
  MentionTable mentions;
};

TaggedCorpus tag_corpus(std::vector<Document> documents, const GazetteerSet &gazetteers);

// The opposing relation's seeds, consulted to detect conflicting
// nominations.
struct RivalSeeds {
  const RelationType *relation = nullptr;
  std::vector<Pattern> patterns;
  std::vector<RelationInstance> relations;
};

struct EngineHooks {
  std::ostream *log = nullptr;  // one line per iteration
  std::function<void(const BootstrapState &)> on_iteration;
};

// Runs cycles until one adds no relation or max_iterations is reached. With
// no oracle nothing is ever queried.
BootstrapState bootstrap_relation(BootstrapState state, const TaggedCorpus &corpus,
                                  const BootstrapConfig &config, Oracle *oracle,
                                  const RivalSeeds *rival = nullptr,
                                  const EngineHooks &hooks = {});

struct ConflictCandidate {
  RelationInstance instance;
  double score = 0.0;
};

struct ConflictResolution {
  RelationInstance chosen;
  std::string reason;
};

// Decides between two nominations of the same entity pair. `answer` is the
// reply to "does the conservative candidate's relation hold?". Without a
// decisive answer: a negation cue in the between-span picks the
// conservative relation, otherwise the higher score wins, ties going to the
// conservative relation.
ConflictResolution resolve_conflict(const ConflictCandidate &a, const ConflictCandidate &b,
                                    std::span<const std::string> between_words,
                                    std::optional<Answer> answer,
                                    std::span<const std::string> negation_cues);

// Same, asking the oracle first. `sentence` is rendered as query context.
ConflictResolution resolve_conflict(const ConflictCandidate &a, const ConflictCandidate &b,
                                    const Sentence &sentence, const CandidatePair &pair,
                                    Oracle *oracle, const BootstrapConfig &config);

// An untagged span sitting where a known pattern expects an entity.
struct PromotionCandidate {
  std::string pattern_key;
  std::string doc_id;
  int sentence_index = 0;
  TokenSpan span;
  EntityType type = EntityType::kSwProduct;
  std::string surface;

  std::string key() const;  // "ent:<type>:<surface case-folded>"
};

// Promotion sites for a between-word pattern: one endpoint is a typed
// mention, the between-span matches, and the other endpoint is a run of up
// to three untagged name-like tokens. Only gazetteer-backed types are
// promoted.
std::vector<PromotionCandidate> find_promotions(const Pattern &pattern, const Sentence &sentence,
                                                std::span<const EntityMention> mentions,
                                                const std::string &doc_id);

// yes -> user mention; no -> nothing; otherwise a bootstrap mention if the
// pattern is among the known (accepted) patterns.
std::optional<EntityMention> promote_entity(const PromotionCandidate &candidate,
                                            const std::map<std::string, Pattern> &known_patterns,
                                            std::optional<Answer> answer);

struct PipelineResult {
  std::map<std::string, BootstrapState> states;
  std::vector<std::string> kept;     // document ids past the relevance gate
  std::vector<std::string> dropped;
  std::vector<std::string> warnings;
};

// Tags entities, applies the relevance gate (when a model is given; the
// config's threshold replaces the model's), gives kept documents fallback
// trees, then bootstraps every relation type with seeds independently.
// `only` restricts which relation types run; rival seeds always come from
// the full seed set.
PipelineResult run_pipeline(std::vector<Document> documents, const GazetteerSet &gazetteers,
                            const RelevanceModel *relevance, const SeedSet &seeds,
                            const BootstrapConfig &config, Oracle *oracle,
                            const std::set<std::string> *only = nullptr,
                            const EngineHooks &hooks = {});

// Union of known relations in relation-table order, then by key.
std::vector<RelationInstance> extracted_relations(
    const std::map<std::string, BootstrapState> &states);

inline constexpr int kStateSchemaVersion = 1;

nlohmann::json state_to_json(const BootstrapState &state);
BootstrapState state_from_json(const nlohmann::json &j);
void export_state(const BootstrapState &state, const std::filesystem::path &path);
BootstrapState import_state(const std::filesystem::path &path);

// Human-readable pattern, e.g. "{SW_Vendor} has released {SW_Product}".
std::string describe_pattern(const Pattern &pattern);

// Sentence text with the given spans wrapped in [[ ]].
std::string highlight(const Sentence &sentence, std::span<const TokenSpan> spans);

}  // namespace secrel

#endif  // SECREL_BOOTSTRAP_H_
