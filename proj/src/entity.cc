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

#include "secrel/entity.h"

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

namespace secrel {
namespace {

constexpr std::array<std::string_view, kEntityTypeCount> kTypeNames = {
    "SW_Vendor", "SW_Product", "SW_Version", "CVE_ID", "MS_ID", "Vuln_Term", "SW_Symbol",
};

int table_order(EntityType type) { return static_cast<int>(type); }

// Lower value wins an equal-length overlap.
int precedence(EntityType type) {
  switch (type) {
    case EntityType::kCveId: return 0;
    case EntityType::kMsId: return 1;
    case EntityType::kSwSymbol: return 2;
    case EntityType::kSwVersion: return 3;
    default: return 4;
  }
}

std::string sentence_ngram(const Sentence &sentence, int first, int n) {
  std::string key;
  for (int i = first; i < first + n; ++i) {
    if (i > first) key += ' ';
    key += casefold(sentence.tokens[i].text);
  }
  return key;
}

std::string upper(std::string s) {
  for (char &c : s) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return s;
}

struct SurfacePatterns {
  std::regex cve{R"(CVE-\d{4}-\d{4,7})"};
  std::regex ms{R"(MS-?\d{2}-\d{3})"};
  std::regex version{R"(\d+(\.\d+)*)"};
  std::regex call{R"([A-Za-z_][A-Za-z0-9_:.~]*\(\))"};
  std::regex file{R"([A-Za-z0-9_\-]+(\.[A-Za-z0-9_\-]+)*\.(exe|dll|sys|php|js|py))",
                  std::regex::icase};
};

const SurfacePatterns &surface_patterns() {
  static const SurfacePatterns patterns;
  return patterns;
}

}  // namespace

std::string_view entity_type_name(EntityType type) {
  return kTypeNames[static_cast<std::size_t>(type)];
}

std::optional<EntityType> parse_entity_type(std::string_view name) {
  for (EntityType type : kAllEntityTypes) {
    if (entity_type_name(type) == name) return type;
  }
  return std::nullopt;
}

bool is_gazetteer_type(EntityType type) {
  return type == EntityType::kSwVendor || type == EntityType::kSwProduct ||
         type == EntityType::kVulnTerm;
}

std::string_view mention_source_name(MentionSource source) {
  switch (source) {
    case MentionSource::kGazetteer: return "gazetteer";
    case MentionSource::kRegex: return "regex";
    case MentionSource::kBootstrap: return "bootstrap";
    case MentionSource::kUser: return "user";
  }
  return "gazetteer";
}

std::optional<MentionSource> parse_mention_source(std::string_view name) {
  for (MentionSource s : {MentionSource::kGazetteer, MentionSource::kRegex,
                          MentionSource::kBootstrap, MentionSource::kUser}) {
    if (mention_source_name(s) == name) return s;
  }
  return std::nullopt;
}

bool mention_order(const EntityMention &a, const EntityMention &b) {
  if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
  if (a.sentence_index != b.sentence_index) return a.sentence_index < b.sentence_index;
  if (a.span != b.span) return a.span < b.span;
  return table_order(a.type) < table_order(b.type);
}

std::string normalize_alias(std::string_view alias) {
  std::vector<std::string> parts;
  for (const Sentence &sentence : tokenize(alias)) {
    for (const Token &token : sentence.tokens) parts.push_back(casefold(token.text));
  }
  return join(parts, " ");
}

void Gazetteer::add(const std::string &canonical, const std::string &alias) {
  std::string key = normalize_alias(alias);
  if (key.empty()) throw Error("empty alias for canonical '" + canonical + "'");
  auto [it, inserted] = entries_.emplace(key, canonical);
  if (!inserted && it->second != canonical) {
    throw Error("alias '" + key + "' maps to both '" + it->second + "' and '" + canonical + "'");
  }
  int tokens = 1 + static_cast<int>(std::count(key.begin(), key.end(), ' '));
  max_alias_tokens_ = std::max(max_alias_tokens_, tokens);
}

const std::string *Gazetteer::lookup(const std::string &normalized_alias) const {
  auto it = entries_.find(normalized_alias);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> Gazetteer::canonicals() const {
  std::set<std::string> unique;
  for (const auto &[alias, canonical] : entries_) unique.insert(canonical);
  return {unique.begin(), unique.end()};
}

Gazetteer parse_gazetteer(std::string_view contents, EntityType type,
                          const std::string &origin) {
  Gazetteer gazetteer(type);
  std::istringstream in{std::string(contents)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view(line);
    std::size_t first = view.find_first_not_of(" \t");
    if (first == std::string_view::npos || view[first] == '#') continue;
    std::string canonical, alias;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      canonical = line;
    } else {
      canonical = line.substr(0, tab);
      alias = line.substr(tab + 1);
    }
    auto trim = [](std::string &s) {
      std::size_t b = s.find_first_not_of(" \t");
      std::size_t e = s.find_last_not_of(" \t");
      s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    trim(canonical);
    trim(alias);
    if (canonical.empty()) {
      throw Error(origin + ":" + std::to_string(line_no) + ": empty canonical id");
    }
    try {
      gazetteer.add(canonical, canonical);
      if (!alias.empty()) gazetteer.add(canonical, alias);
    } catch (const Error &e) {
      throw Error(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return gazetteer;
}

Gazetteer load_gazetteer(const std::filesystem::path &path, EntityType type) {
  return parse_gazetteer(read_file(path.string()), type, path.string());
}

const Gazetteer *GazetteerSet::find(EntityType type) const {
  for (const Gazetteer &g : gazetteers) {
    if (g.type() == type) return &g;
  }
  return nullptr;
}

GazetteerSet load_gazetteers(const std::filesystem::path &dir) {
  GazetteerSet set;
  for (EntityType type : kAllEntityTypes) {
    if (!is_gazetteer_type(type)) continue;
    std::filesystem::path path = dir / (std::string(entity_type_name(type)) + ".tsv");
    if (!std::filesystem::is_regular_file(path)) {
      throw Error("missing gazetteer for entity type " + std::string(entity_type_name(type)) +
                  ": " + path.string());
    }
    set.gazetteers.push_back(load_gazetteer(path, type));
  }
  return set;
}

std::vector<EntityMention> tag_gazetteer(const Sentence &sentence, const Gazetteer &gazetteer,
                                         const std::string &doc_id) {
  std::vector<EntityMention> out;
  const int size = static_cast<int>(sentence.tokens.size());
  const int longest = std::min(kMaxGazetteerNgram, gazetteer.max_alias_tokens());
  int i = 0;
  while (i < size) {
    int matched = 0;
    for (int n = std::min(longest, size - i); n >= 1; --n) {
      if (const std::string *canonical = gazetteer.lookup(sentence_ngram(sentence, i, n))) {
        out.push_back({doc_id, sentence.index, {i, i + n - 1}, gazetteer.type(), *canonical,
                       MentionSource::kGazetteer});
        matched = n;
        break;
      }
    }
    i += matched > 0 ? matched : 1;
  }
  return out;
}

std::vector<EntityMention> tag_regex(const Sentence &sentence, const std::string &doc_id) {
  const SurfacePatterns &re = surface_patterns();
  std::vector<EntityMention> out;
  for (const Token &token : sentence.tokens) {
    const std::string &t = token.text;
    TokenSpan span{token.index, token.index};
    auto emit = [&](EntityType type, std::string canonical) {
      out.push_back({doc_id, sentence.index, span, type, std::move(canonical),
                     MentionSource::kRegex});
    };
    if (std::regex_match(t, re.cve)) {
      emit(EntityType::kCveId, upper(t));
    } else if (std::regex_match(t, re.ms)) {
      emit(EntityType::kMsId, upper(t));
    } else if (std::regex_match(t, re.version)) {
      emit(EntityType::kSwVersion, t);
    } else if (std::regex_match(t, re.call) || std::regex_match(t, re.file)) {
      emit(EntityType::kSwSymbol, t);
    }
  }
  return out;
}

std::vector<EntityMention> resolve_overlaps(std::vector<EntityMention> mentions) {
  std::stable_sort(mentions.begin(), mentions.end(),
                   [](const EntityMention &a, const EntityMention &b) {
                     if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
                     if (a.sentence_index != b.sentence_index) {
                       return a.sentence_index < b.sentence_index;
                     }
                     if (a.span.length() != b.span.length()) {
                       return a.span.length() > b.span.length();
                     }
                     if (precedence(a.type) != precedence(b.type)) {
                       return precedence(a.type) < precedence(b.type);
                     }
                     if (a.type != b.type) return table_order(a.type) < table_order(b.type);
                     return a.span.first < b.span.first;
                   });
  std::vector<EntityMention> kept;
  for (EntityMention &m : mentions) {
    bool clash = std::any_of(kept.begin(), kept.end(), [&](const EntityMention &k) {
      return k.doc_id == m.doc_id && k.sentence_index == m.sentence_index &&
             k.span.overlaps(m.span);
    });
    if (!clash) kept.push_back(std::move(m));
  }
  std::sort(kept.begin(), kept.end(), mention_order);
  return kept;
}

std::vector<EntityMention> tag_document(const Document &document, const GazetteerSet &gazetteers) {
  std::vector<EntityMention> all;
  for (const Sentence &sentence : document.sentences) {
    std::vector<EntityMention> candidates = tag_regex(sentence, document.id);
    for (const Gazetteer &g : gazetteers.gazetteers) {
      std::vector<EntityMention> found = tag_gazetteer(sentence, g, document.id);
      candidates.insert(candidates.end(), found.begin(), found.end());
    }
    std::vector<EntityMention> resolved = resolve_overlaps(std::move(candidates));
    all.insert(all.end(), resolved.begin(), resolved.end());
  }
  return all;
}

EntityCounts entity_type_counts(std::span<const EntityMention> mentions) {
  EntityCounts counts{};
  for (const EntityMention &m : mentions) ++counts[static_cast<std::size_t>(m.type)];
  return counts;
}

std::vector<std::vector<EntityMention>> mentions_by_sentence(
    const Document &document, std::span<const EntityMention> mentions) {
  std::vector<std::vector<EntityMention>> out(document.sentences.size());
  for (const EntityMention &m : mentions) {
    if (m.sentence_index < 0 || m.sentence_index >= static_cast<int>(out.size())) {
      throw Error("mention sentence index out of range in document " + document.id);
    }
    out[m.sentence_index].push_back(m);
  }
  return out;
}

nlohmann::json mention_to_json(const EntityMention &m) {
  return {{"doc_id", m.doc_id},
          {"sentence", m.sentence_index},
          {"first", m.span.first},
          {"last", m.span.last},
          {"type", entity_type_name(m.type)},
          {"canonical", m.canonical},
          {"provenance", mention_source_name(m.provenance)}};
}

EntityMention mention_from_json(const nlohmann::json &j) {
  EntityMention m;
  m.doc_id = j.at("doc_id").get<std::string>();
  m.sentence_index = j.at("sentence").get<int>();
  m.span = {j.at("first").get<int>(), j.at("last").get<int>()};
  auto type = parse_entity_type(j.at("type").get<std::string>());
  if (!type) throw Error("unknown entity type '" + j.at("type").get<std::string>() + "'");
  m.type = *type;
  m.canonical = j.at("canonical").get<std::string>();
  auto source = parse_mention_source(j.at("provenance").get<std::string>());
  if (!source) throw Error("unknown mention provenance '" + j.at("provenance").get<std::string>() + "'");
  m.provenance = *source;
  return m;
}

}  // namespace secrel
