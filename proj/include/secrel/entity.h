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

#ifndef SECREL_ENTITY_H_
#define SECREL_ENTITY_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "secrel/corpus.h"

namespace secrel {

// The seven security entity types, in table order.
enum class EntityType {
  kSwVendor,
  kSwProduct,
  kSwVersion,
  kCveId,
  kMsId,
  kVulnTerm,
  kSwSymbol,
};

inline constexpr std::size_t kEntityTypeCount = 7;

inline constexpr std::array<EntityType, kEntityTypeCount> kAllEntityTypes = {
    EntityType::kSwVendor, EntityType::kSwProduct, EntityType::kSwVersion,
    EntityType::kCveId,    EntityType::kMsId,      EntityType::kVulnTerm,
    EntityType::kSwSymbol,
};

std::string_view entity_type_name(EntityType type);
std::optional<EntityType> parse_entity_type(std::string_view name);

// Types labelled from alias lists rather than surface expressions.
bool is_gazetteer_type(EntityType type);

enum class MentionSource { kGazetteer, kRegex, kBootstrap, kUser };

std::string_view mention_source_name(MentionSource source);
std::optional<MentionSource> parse_mention_source(std::string_view name);

// Inclusive token range within one sentence.
struct TokenSpan {
  int first = 0;
  int last = 0;

  int length() const { return last - first + 1; }
  bool overlaps(const TokenSpan &o) const { return first <= o.last && o.first <= last; }

  auto operator<=>(const TokenSpan &) const = default;
};

struct EntityMention {
  std::string doc_id;
  int sentence_index = 0;
  TokenSpan span;
  EntityType type = EntityType::kSwVendor;
  std::string canonical;
  MentionSource provenance = MentionSource::kGazetteer;

  bool operator==(const EntityMention &) const = default;
};

// Output order of tag_document: sentence, span, then type.
bool mention_order(const EntityMention &a, const EntityMention &b);

// Alias list for one entity type. Aliases are stored case-folded and in
// tokenizer-normalized form (tokens joined by single spaces), so matching
// compares like with like.
class Gazetteer {
 public:
  explicit Gazetteer(EntityType type) : type_(type) {}

  // Throws when the alias is already bound to a different canonical id.
  void add(const std::string &canonical, const std::string &alias);

  const std::string *lookup(const std::string &normalized_alias) const;

  EntityType type() const { return type_; }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::string> &entries() const { return entries_; }
  int max_alias_tokens() const { return max_alias_tokens_; }

  // Distinct canonical ids, sorted.
  std::vector<std::string> canonicals() const;

 private:
  EntityType type_;
  std::map<std::string, std::string> entries_;
  int max_alias_tokens_ = 0;
};

// Case-folded, tokenizer-normalized alias key.
std::string normalize_alias(std::string_view alias);

// Two-column TSV: canonical<TAB>alias. A line with no tab declares a
// canonical id on its own. "#" lines and blank lines are skipped. Every
// canonical id is also registered as its own alias.
Gazetteer parse_gazetteer(std::string_view contents, EntityType type,
                          const std::string &origin);
Gazetteer load_gazetteer(const std::filesystem::path &path, EntityType type);

struct GazetteerSet {
  std::vector<Gazetteer> gazetteers;

  const Gazetteer *find(EntityType type) const;
};

// Reads "<TypeName>.tsv" for every gazetteer-backed type from a directory.
// Missing files raise an error naming the entity type.
GazetteerSet load_gazetteers(const std::filesystem::path &dir);

inline constexpr int kMaxGazetteerNgram = 6;

// Greedy longest match, left to right, over n-grams of up to six tokens.
std::vector<EntityMention> tag_gazetteer(const Sentence &sentence, const Gazetteer &gazetteer,
                                         const std::string &doc_id = "");

// Token-level surface expressions for CVE_ID, MS_ID, SW_Version and
// SW_Symbol. Identifier canonicals are upper-cased.
std::vector<EntityMention> tag_regex(const Sentence &sentence, const std::string &doc_id = "");

// Drops overlapping mentions: longer spans win, then CVE_ID > MS_ID >
// SW_Symbol > SW_Version > gazetteer types, then table order. Result is in
// mention_order.
std::vector<EntityMention> resolve_overlaps(std::vector<EntityMention> mentions);

std::vector<EntityMention> tag_document(const Document &document, const GazetteerSet &gazetteers);

using EntityCounts = std::array<int, kEntityTypeCount>;

EntityCounts entity_type_counts(std::span<const EntityMention> mentions);

// mentions[s] holds the mentions of sentence s.
std::vector<std::vector<EntityMention>> mentions_by_sentence(
    const Document &document, std::span<const EntityMention> mentions);

nlohmann::json mention_to_json(const EntityMention &mention);
EntityMention mention_from_json(const nlohmann::json &j);

}  // namespace secrel

#endif  // SECREL_ENTITY_H_
