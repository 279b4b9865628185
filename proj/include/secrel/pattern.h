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

#ifndef SECREL_PATTERN_H_
#define SECREL_PATTERN_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "secrel/corpus.h"
#include "secrel/entity.h"

namespace secrel {

struct RelationType {
  int index;  // 1-based table row
  EntityType subject;
  std::string_view name;
  EntityType object;
  int seed_pattern_count;  // size of the shipped seed pattern set
};

inline constexpr std::array<RelationType, 8> kRelationTypes = {{
    {1, EntityType::kSwVendor, "is_vendor_of", EntityType::kSwProduct, 14},
    {2, EntityType::kSwVersion, "is_version_of", EntityType::kSwProduct, 6},
    {3, EntityType::kCveId, "CVE_of_vuln", EntityType::kVulnTerm, 1},
    {4, EntityType::kMsId, "MS_of_SW", EntityType::kSwProduct, 6},
    {5, EntityType::kMsId, "MS_of_vuln", EntityType::kVulnTerm, 7},
    {6, EntityType::kVulnTerm, "vuln_of_SW", EntityType::kSwProduct, 14},
    {7, EntityType::kSwSymbol, "symbol_of", EntityType::kSwProduct, 2},
    {8, EntityType::kSwVersion, "not_version_of", EntityType::kSwProduct, 9},
}};

const RelationType *find_relation(std::string_view name);
const RelationType &require_relation(std::string_view name);

// is_version_of and not_version_of nominate the same entity pairs with
// opposite meaning.
const RelationType *conflicting_relation(const RelationType &relation);

// The relation preferred when a conflict cannot be decided otherwise.
bool is_conservative_relation(const RelationType &relation);

enum class RelationSource { kSeed, kBootstrap, kUser };

std::string_view relation_source_name(RelationSource source);

// Stable identity: "rel:<name>:<subject>:<object>", entity keys case-folded.
std::string relation_key(std::string_view relation, std::string_view subject,
                         std::string_view object);

struct RelationInstance {
  std::string relation;
  std::string subject;
  std::string object;
  RelationSource provenance = RelationSource::kSeed;

  std::string key() const { return relation_key(relation, subject, object); }
  bool operator==(const RelationInstance &) const = default;
};

enum class Direction { kSubjectFirst, kObjectFirst };
enum class TokenKind { kWord, kPos };
enum class Anchor { kLeftEntity, kRightEntity };

std::string_view direction_name(Direction d);
std::string_view token_kind_name(TokenKind k);
std::string_view anchor_name(Anchor a);

// Every token strictly between the two entities. Word tokens are stored
// case-folded.
struct FullBetween {
  TokenKind kind = TokenKind::kWord;
  std::vector<std::string> tokens;
  bool operator==(const FullBetween &) const = default;
};

// A contiguous run of the between-span touching one of the two entities.
struct AnchoredWindow {
  Anchor anchor = Anchor::kLeftEntity;
  TokenKind kind = TokenKind::kWord;
  std::vector<std::string> tokens;
  bool operator==(const AnchoredWindow &) const = default;
};

// Node labels on the tree path between the two entity head tokens, read
// from the left entity to the right one.
struct ParsePath {
  std::vector<std::string> labels;
  bool operator==(const ParsePath &) const = default;
};

using PatternVariant = std::variant<FullBetween, AnchoredWindow, ParsePath>;

enum class PatternSource { kSeed, kLearned };

struct Pattern {
  std::string relation;
  Direction direction = Direction::kSubjectFirst;
  PatternVariant variant;
  PatternSource provenance = PatternSource::kLearned;

  // "pat:<name>:<direction>:<variant-kind>:<tokens joined by spaces>".
  std::string key() const;
  bool operator==(const Pattern &) const = default;
};

std::string variant_kind(const PatternVariant &variant);

// Checks the structural invariants; window_cap bounds AnchoredWindow length.
void validate_pattern(const Pattern &pattern, int window_cap);

// A pair of mentions in one sentence that could instantiate a relation.
struct CandidatePair {
  EntityMention subject;
  EntityMention object;
  Direction direction = Direction::kSubjectFirst;

  const EntityMention &left() const {
    return direction == Direction::kSubjectFirst ? subject : object;
  }
  const EntityMention &right() const {
    return direction == Direction::kSubjectFirst ? object : subject;
  }
  // Number of tokens strictly between the two mentions.
  int gap() const { return right().span.first - left().span.last - 1; }
};

// All ordered pairs of distinct, non-overlapping mentions with the
// relation's subject and object types, including adjacent ones.
std::vector<CandidatePair> candidate_pairs(const Sentence &sentence,
                                           std::span<const EntityMention> mentions,
                                           const RelationType &relation);

struct GenerationOptions {
  int window_cap = 5;
  int between_cap = 12;
  bool pos_patterns = true;
  bool parse_paths = true;
};

// Patterns describing how `pair` is expressed in `sentence`: the whole
// between-span as words and as tags (when it has 1..between_cap tokens),
// its word prefixes and suffixes up to window_cap, and the tree path
// between the entity heads (last token of each span) when the sentence
// has a tree. Deduplicated, provenance kLearned.
std::vector<Pattern> generate_patterns(const Sentence &sentence, const CandidatePair &pair,
                                       const RelationType &relation,
                                       const GenerationOptions &options = {});

struct Occurrence {
  std::string pattern_key;
  std::string doc_id;
  int sentence_index = 0;
  EntityMention subject;
  EntityMention object;

  std::string relation_key() const;
  bool operator==(const Occurrence &) const = default;
};

bool occurrence_order(const Occurrence &a, const Occurrence &b);

std::vector<Occurrence> match_pattern(const Pattern &pattern, const Sentence &sentence,
                                      std::span<const EntityMention> mentions,
                                      const std::string &doc_id = "");

// mentions[d][s] holds the mentions of sentence s of document d.
using MentionTable = std::vector<std::vector<std::vector<EntityMention>>>;

MentionTable build_mention_table(std::span<const Document> documents,
                                 std::span<const std::vector<EntityMention>> mentions);

// Every pattern key maps to its occurrences (possibly none), in document,
// sentence and span order, deduplicated.
std::map<std::string, std::vector<Occurrence>> match_corpus(std::span<const Pattern> patterns,
                                                            std::span<const Document> documents,
                                                            const MentionTable &mentions);

nlohmann::json pattern_to_json(const Pattern &pattern);
Pattern pattern_from_json(const nlohmann::json &j);

nlohmann::json relation_to_json(const RelationInstance &instance);
RelationInstance relation_from_json(const nlohmann::json &j);

struct RelationSeeds {
  std::vector<Pattern> patterns;
  std::vector<RelationInstance> relations;
  bool empty() const { return patterns.empty() && relations.empty(); }
};

using SeedSet = std::map<std::string, RelationSeeds>;

// One JSON file per relation type:
//   {"relation": name, "patterns": [...], "relations": [...]}
// Every entry's own "relation" field must agree with the file's.
RelationSeeds parse_seed_file(const nlohmann::json &j, const std::string &origin);
SeedSet load_seeds(const std::filesystem::path &dir);

// Relation lists (gold and extracted files): a JSON array of relation
// objects.
std::vector<RelationInstance> load_relation_list(const std::filesystem::path &path);
void save_relation_list(std::span<const RelationInstance> relations,
                        const std::filesystem::path &path);

}  // namespace secrel

#endif  // SECREL_PATTERN_H_
