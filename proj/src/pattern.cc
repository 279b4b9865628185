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

#include "secrel/pattern.h"

#include <algorithm>
#include <set>
#include <tuple>
#include <unordered_map>

namespace secrel {
namespace {

using nlohmann::json;

std::string make_key(std::string_view relation, Direction direction, std::string_view kind,
                     const std::vector<std::string> &tokens) {
  std::string key = "pat:";
  key += relation;
  key += ':';
  key += direction_name(direction);
  key += ':';
  key += kind;
  key += ':';
  key += join(tokens, " ");
  return key;
}

std::string between_kind(TokenKind kind) {
  return std::string("between-") + std::string(token_kind_name(kind));
}

std::string window_kind(Anchor anchor, TokenKind kind) {
  return std::string("window-") + (anchor == Anchor::kLeftEntity ? "left-" : "right-") +
         std::string(token_kind_name(kind));
}

std::vector<std::string> project(const Sentence &sentence, int first, int count,
                                 TokenKind kind) {
  std::vector<std::string> out;
  out.reserve(count);
  for (int i = first; i < first + count; ++i) {
    const Token &t = sentence.tokens[i];
    out.push_back(kind == TokenKind::kWord ? casefold(t.text) : t.pos);
  }
  return out;
}

bool projection_equals(const Sentence &sentence, int first, TokenKind kind,
                       const std::vector<std::string> &tokens) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token &t = sentence.tokens[first + static_cast<int>(i)];
    if (kind == TokenKind::kWord ? casefold(t.text) != tokens[i] : t.pos != tokens[i]) {
      return false;
    }
  }
  return true;
}

std::vector<std::string> path_between(const Sentence &sentence, const CandidatePair &pair) {
  return tree_path(*sentence.tree, pair.left().span.last, pair.right().span.last);
}

bool variant_matches(const PatternVariant &variant, const Sentence &sentence,
                     const CandidatePair &pair) {
  const int gap = pair.gap();
  const int start = pair.left().span.last + 1;
  if (const auto *full = std::get_if<FullBetween>(&variant)) {
    return gap >= 1 && gap == static_cast<int>(full->tokens.size()) &&
           projection_equals(sentence, start, full->kind, full->tokens);
  }
  if (const auto *window = std::get_if<AnchoredWindow>(&variant)) {
    const int k = static_cast<int>(window->tokens.size());
    if (gap < k) return false;
    int first = window->anchor == Anchor::kLeftEntity ? start : pair.right().span.first - k;
    return projection_equals(sentence, first, window->kind, window->tokens);
  }
  const auto &path = std::get<ParsePath>(variant);
  return sentence.tree.has_value() && path_between(sentence, pair) == path.labels;
}

Occurrence make_occurrence(const std::string &key, const std::string &doc_id,
                           const Sentence &sentence, const CandidatePair &pair) {
  return {key, doc_id, sentence.index, pair.subject, pair.object};
}

std::string require_str(const json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(std::string("missing or non-string field '") + key + "'");
  }
  return it->get<std::string>();
}

TokenKind parse_kind(const json &variant) {
  std::string kind = variant.value("kind", std::string("word"));
  if (kind == "word") return TokenKind::kWord;
  if (kind == "pos") return TokenKind::kPos;
  throw Error("unknown token kind '" + kind + "'");
}

std::vector<std::string> parse_tokens(const json &variant, const char *field, TokenKind kind) {
  auto it = variant.find(field);
  if (it == variant.end() || !it->is_array()) {
    throw Error(std::string("pattern variant needs a '") + field + "' array");
  }
  std::vector<std::string> out;
  for (const json &t : *it) {
    if (!t.is_string()) throw Error(std::string("'") + field + "' entries must be strings");
    out.push_back(kind == TokenKind::kWord ? casefold(t.get<std::string>()) : t.get<std::string>());
  }
  return out;
}

}  // namespace

const RelationType *find_relation(std::string_view name) {
  for (const RelationType &r : kRelationTypes) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const RelationType &require_relation(std::string_view name) {
  const RelationType *r = find_relation(name);
  if (!r) throw Error("unknown relation '" + std::string(name) + "'");
  return *r;
}

const RelationType *conflicting_relation(const RelationType &relation) {
  if (relation.name == "is_version_of") return find_relation("not_version_of");
  if (relation.name == "not_version_of") return find_relation("is_version_of");
  return nullptr;
}

bool is_conservative_relation(const RelationType &relation) {
  return relation.name == "not_version_of";
}

std::string_view relation_source_name(RelationSource source) {
  switch (source) {
    case RelationSource::kSeed: return "seed";
    case RelationSource::kBootstrap: return "bootstrap";
    case RelationSource::kUser: return "user";
  }
  return "seed";
}

std::string relation_key(std::string_view relation, std::string_view subject,
                         std::string_view object) {
  std::string key = "rel:";
  key += relation;
  key += ':';
  key += casefold(subject);
  key += ':';
  key += casefold(object);
  return key;
}

std::string_view direction_name(Direction d) {
  return d == Direction::kSubjectFirst ? "subject_first" : "object_first";
}

std::string_view token_kind_name(TokenKind k) { return k == TokenKind::kWord ? "word" : "pos"; }

std::string_view anchor_name(Anchor a) {
  return a == Anchor::kLeftEntity ? "left_entity" : "right_entity";
}

std::string variant_kind(const PatternVariant &variant) {
  if (const auto *full = std::get_if<FullBetween>(&variant)) return between_kind(full->kind);
  if (const auto *window = std::get_if<AnchoredWindow>(&variant)) {
    return window_kind(window->anchor, window->kind);
  }
  return "path";
}

std::string Pattern::key() const {
  const std::vector<std::string> *tokens = nullptr;
  if (const auto *full = std::get_if<FullBetween>(&variant)) {
    tokens = &full->tokens;
  } else if (const auto *window = std::get_if<AnchoredWindow>(&variant)) {
    tokens = &window->tokens;
  } else {
    tokens = &std::get<ParsePath>(variant).labels;
  }
  return make_key(relation, direction, variant_kind(variant), *tokens);
}

void validate_pattern(const Pattern &pattern, int window_cap) {
  require_relation(pattern.relation);
  auto check_tokens = [](const std::vector<std::string> &tokens) {
    for (const std::string &t : tokens) {
      if (t.empty()) throw Error("pattern token must be non-empty");
      if (t.find_first_of(" \t\n\r") != std::string::npos) {
        throw Error("pattern token '" + t + "' contains whitespace");
      }
    }
  };
  if (const auto *full = std::get_if<FullBetween>(&pattern.variant)) {
    if (full->tokens.empty()) throw Error("between pattern needs at least one token");
    check_tokens(full->tokens);
  } else if (const auto *window = std::get_if<AnchoredWindow>(&pattern.variant)) {
    if (window->tokens.empty()) throw Error("window pattern needs at least one token");
    if (static_cast<int>(window->tokens.size()) > window_cap) {
      throw Error("window pattern longer than the window cap of " + std::to_string(window_cap));
    }
    check_tokens(window->tokens);
  } else {
    const auto &path = std::get<ParsePath>(pattern.variant);
    if (path.labels.size() < 2) throw Error("parse path needs at least two labels");
    check_tokens(path.labels);
  }
}

std::vector<CandidatePair> candidate_pairs(const Sentence &sentence,
                                           std::span<const EntityMention> mentions,
                                           const RelationType &relation) {
  std::vector<CandidatePair> pairs;
  const int size = static_cast<int>(sentence.tokens.size());
  for (std::size_t s = 0; s < mentions.size(); ++s) {
    if (mentions[s].type != relation.subject) continue;
    for (std::size_t o = 0; o < mentions.size(); ++o) {
      if (o == s || mentions[o].type != relation.object) continue;
      const EntityMention &subj = mentions[s];
      const EntityMention &obj = mentions[o];
      if (subj.span.overlaps(obj.span)) continue;
      if (subj.span.first < 0 || subj.span.last >= size || obj.span.first < 0 ||
          obj.span.last >= size) {
        throw Error("mention span outside sentence " + std::to_string(sentence.index));
      }
      Direction d = subj.span.first < obj.span.first ? Direction::kSubjectFirst
                                                     : Direction::kObjectFirst;
      pairs.push_back({subj, obj, d});
    }
  }
  return pairs;
}

std::vector<Pattern> generate_patterns(const Sentence &sentence, const CandidatePair &pair,
                                       const RelationType &relation,
                                       const GenerationOptions &options) {
  std::vector<Pattern> out;
  std::set<std::string> seen;
  auto emit = [&](PatternVariant variant) {
    Pattern p{std::string(relation.name), pair.direction, std::move(variant),
              PatternSource::kLearned};
    if (seen.insert(p.key()).second) out.push_back(std::move(p));
  };

  const int gap = pair.gap();
  const int start = pair.left().span.last + 1;
  if (gap >= 1) {
    if (gap <= options.between_cap) {
      emit(FullBetween{TokenKind::kWord, project(sentence, start, gap, TokenKind::kWord)});
      if (options.pos_patterns) {
        emit(FullBetween{TokenKind::kPos, project(sentence, start, gap, TokenKind::kPos)});
      }
    }
    for (int k = 1; k <= std::min(options.window_cap, gap); ++k) {
      emit(AnchoredWindow{Anchor::kLeftEntity, TokenKind::kWord,
                          project(sentence, start, k, TokenKind::kWord)});
    }
    for (int k = 1; k <= std::min(options.window_cap, gap); ++k) {
      emit(AnchoredWindow{Anchor::kRightEntity, TokenKind::kWord,
                          project(sentence, pair.right().span.first - k, k, TokenKind::kWord)});
    }
  }
  if (options.parse_paths && sentence.tree) {
    emit(ParsePath{path_between(sentence, pair)});
  }
  return out;
}

std::string Occurrence::relation_key() const {
  std::string_view relation = pattern_key;
  relation.remove_prefix(4);  // "pat:"
  relation = relation.substr(0, relation.find(':'));
  return secrel::relation_key(relation, subject.canonical, object.canonical);
}

bool occurrence_order(const Occurrence &a, const Occurrence &b) {
  return std::tie(a.pattern_key, a.doc_id, a.sentence_index, a.subject.span, a.object.span) <
         std::tie(b.pattern_key, b.doc_id, b.sentence_index, b.subject.span, b.object.span);
}

std::vector<Occurrence> match_pattern(const Pattern &pattern, const Sentence &sentence,
                                      std::span<const EntityMention> mentions,
                                      const std::string &doc_id) {
  const RelationType &relation = require_relation(pattern.relation);
  const std::string key = pattern.key();
  std::vector<Occurrence> out;
  for (const CandidatePair &pair : candidate_pairs(sentence, mentions, relation)) {
    if (pair.direction != pattern.direction) continue;
    if (variant_matches(pattern.variant, sentence, pair)) {
      out.push_back(make_occurrence(key, doc_id, sentence, pair));
    }
  }
  return out;
}

MentionTable build_mention_table(std::span<const Document> documents,
                                 std::span<const std::vector<EntityMention>> mentions) {
  if (documents.size() != mentions.size()) {
    throw Error("mention lists must be given for every document");
  }
  MentionTable table;
  table.reserve(documents.size());
  for (std::size_t d = 0; d < documents.size(); ++d) {
    table.push_back(mentions_by_sentence(documents[d], mentions[d]));
  }
  return table;
}

std::map<std::string, std::vector<Occurrence>> match_corpus(std::span<const Pattern> patterns,
                                                            std::span<const Document> documents,
                                                            const MentionTable &mentions) {
  std::map<std::string, std::vector<Occurrence>> result;
  if (mentions.size() != documents.size()) {
    throw Error("match_corpus: mention table does not cover the documents");
  }

  // Per relation: pattern keys and the longest window to probe.
  struct RelationIndex {
    const RelationType *relation = nullptr;
    std::set<std::string> keys;
    int longest_window = 0;
    bool has_paths = false;
  };
  std::map<std::string, RelationIndex> by_relation;
  for (const Pattern &p : patterns) {
    std::string key = p.key();
    result.try_emplace(key);
    RelationIndex &index = by_relation[p.relation];
    index.relation = &require_relation(p.relation);
    index.keys.insert(key);
    if (const auto *w = std::get_if<AnchoredWindow>(&p.variant)) {
      index.longest_window = std::max(index.longest_window, static_cast<int>(w->tokens.size()));
    }
    if (std::holds_alternative<ParsePath>(p.variant)) index.has_paths = true;
  }

  for (std::size_t d = 0; d < documents.size(); ++d) {
    const Document &doc = documents[d];
    for (const Sentence &sentence : doc.sentences) {
      const auto &sentence_mentions = mentions[d].at(sentence.index);
      if (sentence_mentions.size() < 2) continue;
      for (const auto &[name, index] : by_relation) {
        for (const CandidatePair &pair :
             candidate_pairs(sentence, sentence_mentions, *index.relation)) {
          // Enumerate the key of every pattern this pair instantiates and
          // keep the ones in the requested set.
          auto probe = [&](std::string_view kind, const std::vector<std::string> &tokens) {
            std::string key = make_key(name, pair.direction, kind, tokens);
            if (index.keys.count(key)) {
              result[key].push_back(make_occurrence(key, doc.id, sentence, pair));
            }
          };
          const int gap = pair.gap();
          const int start = pair.left().span.last + 1;
          if (gap >= 1) {
            for (TokenKind kind : {TokenKind::kWord, TokenKind::kPos}) {
              probe(between_kind(kind), project(sentence, start, gap, kind));
              for (int k = 1; k <= std::min(gap, index.longest_window); ++k) {
                probe(window_kind(Anchor::kLeftEntity, kind), project(sentence, start, k, kind));
                probe(window_kind(Anchor::kRightEntity, kind),
                      project(sentence, pair.right().span.first - k, k, kind));
              }
            }
          }
          if (index.has_paths && sentence.tree) probe("path", path_between(sentence, pair));
        }
      }
    }
  }

  for (auto &[key, occurrences] : result) {
    std::sort(occurrences.begin(), occurrences.end(), occurrence_order);
    occurrences.erase(std::unique(occurrences.begin(), occurrences.end(),
                                  [](const Occurrence &a, const Occurrence &b) {
                                    return !occurrence_order(a, b) && !occurrence_order(b, a);
                                  }),
                      occurrences.end());
  }
  return result;
}

json pattern_to_json(const Pattern &pattern) {
  json variant;
  if (const auto *full = std::get_if<FullBetween>(&pattern.variant)) {
    variant = {{"type", "full_between"},
               {"kind", token_kind_name(full->kind)},
               {"tokens", full->tokens}};
  } else if (const auto *window = std::get_if<AnchoredWindow>(&pattern.variant)) {
    variant = {{"type", "anchored_window"},
               {"anchor", anchor_name(window->anchor)},
               {"kind", token_kind_name(window->kind)},
               {"tokens", window->tokens}};
  } else {
    variant = {{"type", "parse_path"}, {"labels", std::get<ParsePath>(pattern.variant).labels}};
  }
  return {{"relation", pattern.relation},
          {"direction", direction_name(pattern.direction)},
          {"variant", std::move(variant)},
          {"provenance", pattern.provenance == PatternSource::kSeed ? "seed" : "learned"}};
}

Pattern pattern_from_json(const json &j) {
  if (!j.is_object()) throw Error("pattern must be a JSON object");
  Pattern p;
  p.relation = require_str(j, "relation");
  require_relation(p.relation);
  std::string direction = require_str(j, "direction");
  if (direction == "subject_first") {
    p.direction = Direction::kSubjectFirst;
  } else if (direction == "object_first") {
    p.direction = Direction::kObjectFirst;
  } else {
    throw Error("unknown direction '" + direction + "'");
  }
  auto vit = j.find("variant");
  if (vit == j.end() || !vit->is_object()) throw Error("pattern needs a 'variant' object");
  const json &v = *vit;
  std::string type = require_str(v, "type");
  if (type == "full_between") {
    TokenKind kind = parse_kind(v);
    p.variant = FullBetween{kind, parse_tokens(v, "tokens", kind)};
  } else if (type == "anchored_window") {
    std::string anchor = require_str(v, "anchor");
    Anchor a;
    if (anchor == "left_entity") {
      a = Anchor::kLeftEntity;
    } else if (anchor == "right_entity") {
      a = Anchor::kRightEntity;
    } else {
      throw Error("unknown anchor '" + anchor + "'");
    }
    TokenKind kind = parse_kind(v);
    p.variant = AnchoredWindow{a, kind, parse_tokens(v, "tokens", kind)};
  } else if (type == "parse_path") {
    p.variant = ParsePath{parse_tokens(v, "labels", TokenKind::kPos)};
  } else {
    throw Error("unknown pattern variant type '" + type + "'");
  }
  std::string provenance = j.value("provenance", std::string("seed"));
  if (provenance == "seed") {
    p.provenance = PatternSource::kSeed;
  } else if (provenance == "learned") {
    p.provenance = PatternSource::kLearned;
  } else {
    throw Error("unknown pattern provenance '" + provenance + "'");
  }
  return p;
}

json relation_to_json(const RelationInstance &instance) {
  return {{"relation", instance.relation},
          {"subject", instance.subject},
          {"object", instance.object},
          {"provenance", relation_source_name(instance.provenance)}};
}

RelationInstance relation_from_json(const json &j) {
  if (!j.is_object()) throw Error("relation must be a JSON object");
  RelationInstance r;
  r.relation = require_str(j, "relation");
  require_relation(r.relation);
  r.subject = require_str(j, "subject");
  r.object = require_str(j, "object");
  if (r.subject.empty() || r.object.empty()) throw Error("relation entities must be non-empty");
  std::string provenance = j.value("provenance", std::string("seed"));
  if (provenance == "seed") {
    r.provenance = RelationSource::kSeed;
  } else if (provenance == "bootstrap") {
    r.provenance = RelationSource::kBootstrap;
  } else if (provenance == "user") {
    r.provenance = RelationSource::kUser;
  } else {
    throw Error("unknown relation provenance '" + provenance + "'");
  }
  return r;
}

RelationSeeds parse_seed_file(const json &j, const std::string &origin) {
  try {
    if (!j.is_object()) throw Error("seed file must hold a JSON object");
    std::string relation = require_str(j, "relation");
    require_relation(relation);
    RelationSeeds seeds;
    for (const json &jp : j.value("patterns", json::array())) {
      Pattern p = pattern_from_json(jp);
      p.provenance = PatternSource::kSeed;
      if (p.relation != relation) {
        throw Error("pattern for '" + p.relation + "' in seeds of '" + relation + "'");
      }
      validate_pattern(p, 5);
      seeds.patterns.push_back(std::move(p));
    }
    for (const json &jr : j.value("relations", json::array())) {
      RelationInstance r = relation_from_json(jr);
      r.provenance = RelationSource::kSeed;
      if (r.relation != relation) {
        throw Error("relation '" + r.relation + "' in seeds of '" + relation + "'");
      }
      seeds.relations.push_back(std::move(r));
    }
    return seeds;
  } catch (const json::exception &e) {
    throw Error(origin + ": " + e.what());
  } catch (const Error &e) {
    throw Error(origin + ": " + e.what());
  }
}

SeedSet load_seeds(const std::filesystem::path &dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  SeedSet seeds;
  for (const fs::path &file : files) {
    std::string text = read_file(file.string());
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error &e) {
      throw Error(file.string() + ":" + std::to_string(line_of_offset(text, e.byte)) +
                  ": malformed JSON: " + e.what());
    }
    RelationSeeds parsed = parse_seed_file(j, file.string());
    std::string relation = j.at("relation").get<std::string>();
    RelationSeeds &target = seeds[relation];
    target.patterns.insert(target.patterns.end(), parsed.patterns.begin(), parsed.patterns.end());
    target.relations.insert(target.relations.end(), parsed.relations.begin(),
                            parsed.relations.end());
  }
  return seeds;
}

std::vector<RelationInstance> load_relation_list(const std::filesystem::path &path) {
  std::string text = read_file(path.string());
  try {
    json j = json::parse(text);
    if (!j.is_array()) throw Error("expected a JSON array of relations");
    std::vector<RelationInstance> out;
    for (const json &jr : j) out.push_back(relation_from_json(jr));
    return out;
  } catch (const json::parse_error &e) {
    throw Error(path.string() + ":" + std::to_string(line_of_offset(text, e.byte)) +
                ": malformed JSON: " + e.what());
  } catch (const json::exception &e) {
    throw Error(path.string() + ": " + e.what());
  } catch (const Error &e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void save_relation_list(std::span<const RelationInstance> relations,
                        const std::filesystem::path &path) {
  json j = json::array();
  for (const RelationInstance &r : relations) j.push_back(relation_to_json(r));
  write_file(path.string(), j.dump(2) + "\n");
}

}  // namespace secrel
