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

#include "secrel/evalgen.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "secrel/base.h"

namespace secrel {
namespace {

using nlohmann::json;

struct RelationTemplate {
  std::string_view relation;
  std::string_view text;  // {S} subject, {O} object
};

struct NoiseTemplate {
  std::string_view text;  // {A}, {B}
  EntityType a;
  EntityType b;
};

// Every template starts with a capitalized word so sentence splitting never
// depends on the entity drawn, and holds no digits or entity names.
constexpr RelationTemplate kDefaultTemplates[] = {
    {"is_vendor_of", "{S} has released an update for {O} ."},
    {"is_vendor_of", "Engineers at {S} maintain the {O} codebase ."},
    {"is_vendor_of", "The {O} suite is developed by {S} ."},
    {"is_version_of", "Users should upgrade {O} to version {S} immediately ."},
    {"is_version_of", "The patched build {S} of {O} is now available ."},
    {"CVE_of_vuln", "The advisory {S} describes a {O} flaw ."},
    {"MS_of_SW", "Bulletin {S} addresses issues in {O} ."},
    {"MS_of_vuln", "Bulletin {S} fixes a {O} weakness ."},
    {"vuln_of_SW", "A {S} vulnerability was found in {O} ."},
    {"vuln_of_SW", "Attackers can exploit {O} through {S} attacks ."},
    {"symbol_of", "The function {S} inside {O} mishandles input ."},
    {"not_version_of", "Versions of {O} prior to {S} are affected ."},
    {"not_version_of", "The flaw does not affect {O} release {S} anymore ."},
};

// Neutral co-occurrences. The first one shares a leading word window with
// an is_vendor_of template.
constexpr NoiseTemplate kDefaultNoise[] = {
    {"{A} has released a statement mentioning {B} .", EntityType::kSwVendor,
     EntityType::kSwProduct},
    {"Analysts compared {A} with {B} in a recent survey .", EntityType::kSwVendor,
     EntityType::kSwProduct},
    {"Reviewers liked {A} more than {B} last year .", EntityType::kSwProduct,
     EntityType::kSwProduct},
    {"The conference featured talks on {A} and on {B} .", EntityType::kVulnTerm,
     EntityType::kSwProduct},
    {"Commentators linked {A} and {B} without evidence .", EntityType::kMsId,
     EntityType::kVulnTerm},
    {"Several forums discussed {A} beside {B} this week .", EntityType::kSwVersion,
     EntityType::kSwProduct},
    {"Researchers listed {A} next to {B} in a spreadsheet .", EntityType::kCveId,
     EntityType::kVulnTerm},
};

struct TemplateSet {
  std::span<const RelationTemplate> relations;
  std::span<const NoiseTemplate> noise;
};

const TemplateSet &require_template_set(const std::string &name) {
  static const TemplateSet kDefault{kDefaultTemplates, kDefaultNoise};
  if (name == "default") return kDefault;
  throw Error("unknown template set '" + name + "'");
}

std::vector<std::string> version_pool() {
  std::vector<std::string> out;
  for (int major = 1; major <= 12; ++major) {
    for (int minor = 0; minor <= 9; ++minor) {
      for (int patch = 0; patch <= 20; ++patch) {
        out.push_back(std::to_string(major) + "." + std::to_string(minor) + "." +
                      std::to_string(patch));
      }
    }
  }
  return out;
}

std::vector<std::string> cve_pool() {
  std::vector<std::string> out;
  for (int year = 2010; year <= 2016; ++year) {
    for (int n = 1000; n < 2000; ++n) {
      out.push_back("CVE-" + std::to_string(year) + "-" + std::to_string(n));
    }
  }
  return out;
}

std::vector<std::string> ms_pool() {
  std::vector<std::string> out;
  char buf[16];
  for (int year = 10; year <= 16; ++year) {
    for (int n = 1; n <= 120; ++n) {
      std::snprintf(buf, sizeof(buf), "MS%02d-%03d", year, n);
      out.push_back(buf);
    }
  }
  return out;
}

std::vector<std::string> symbol_pool() {
  static const char *verbs[] = {"Get",  "Set",  "Load", "Parse", "Read", "Write",
                                "Alloc", "Free", "Copy", "Open",  "Init", "Query"};
  static const char *nouns[] = {"Buffer", "Header", "Image",  "Font",  "Object",
                                "Stream", "Handle", "Table", "Record", "Packet"};
  std::vector<std::string> out;
  for (const char *v : verbs) {
    for (const char *n : nouns) {
      std::string name = std::string(v) + n;
      out.push_back(name + "()");
      out.push_back(casefold(name) + ".dll");
    }
  }
  return out;
}

std::vector<std::string> base_pool(EntityType type, const GazetteerSet &gazetteers) {
  switch (type) {
    case EntityType::kSwVersion: return version_pool();
    case EntityType::kCveId: return cve_pool();
    case EntityType::kMsId: return ms_pool();
    case EntityType::kSwSymbol: return symbol_pool();
    default: break;
  }
  const Gazetteer *g = gazetteers.find(type);
  if (g == nullptr) {
    throw Error("no gazetteer for " + std::string(entity_type_name(type)));
  }
  return g->canonicals();
}

class EntityDraw {
 public:
  EntityDraw(const GazetteerSet &gazetteers, std::mt19937_64 &rng) : rng_(rng) {
    for (EntityType type : kAllEntityTypes) {
      std::vector<std::string> pool = base_pool(type, gazetteers);
      all_[type] = pool;
      std::shuffle(pool.begin(), pool.end(), rng_);
      fresh_[type] = std::move(pool);
    }
  }

  // Distinct across all calls.
  std::string fresh(EntityType type) {
    std::vector<std::string> &pool = fresh_[type];
    if (pool.empty()) {
      throw Error("synthetic corpus needs more distinct " + std::string(entity_type_name(type)) +
                  " entities than the " + std::to_string(all_[type].size()) + " available");
    }
    std::string out = std::move(pool.back());
    pool.pop_back();
    return out;
  }

  std::string any(EntityType type) {
    const std::vector<std::string> &pool = all_[type];
    if (pool.empty()) throw Error("no " + std::string(entity_type_name(type)) + " entities");
    return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng_)];
  }

 private:
  std::mt19937_64 &rng_;
  std::map<EntityType, std::vector<std::string>> all_;
  std::map<EntityType, std::vector<std::string>> fresh_;
};

std::string fill(std::string_view text, std::string_view a_mark, const std::string &a,
                 std::string_view b_mark, const std::string &b) {
  std::string out(text);
  out.replace(out.find(a_mark), a_mark.size(), a);
  out.replace(out.find(b_mark), b_mark.size(), b);
  return out;
}

std::string cell(std::optional<double> value) {
  if (!value) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *value);
  return buf;
}

json optional_number(std::optional<double> value) {
  return value ? json(*value) : json(nullptr);
}

json row_to_json(const EvalRow &row) {
  return {{"relation", row.relation},
          {"tp", row.tp},
          {"fp", row.fp},
          {"precision", optional_number(row.precision())}};
}

}  // namespace

void SynthSpec::validate() const {
  if (num_docs < 0) throw Error("num_docs must be non-negative");
  if (relations_per_doc < 0) throw Error("relations_per_doc must be non-negative");
  if (!(noise_sentence_rate >= 0.0 && noise_sentence_rate <= 1.0)) {
    throw Error("noise_sentence_rate must lie in [0, 1]");
  }
  require_template_set(template_set);
}

std::vector<std::string> template_sets() { return {"default"}; }

SynthCorpus generate_corpus(const SynthSpec &spec, const GazetteerSet &gazetteers) {
  spec.validate();
  SynthCorpus out;
  if (spec.num_docs == 0) return out;
  const TemplateSet &set = require_template_set(spec.template_set);
  std::mt19937_64 rng(spec.rng_seed);
  EntityDraw draw(gazetteers, rng);
  std::bernoulli_distribution noise(spec.noise_sentence_rate);
  std::uniform_int_distribution<std::size_t> pick_noise(0, set.noise.size() - 1);
  std::size_t next_template = 0;
  char id[32];
  for (int d = 0; d < spec.num_docs; ++d) {
    std::snprintf(id, sizeof(id), "synth-%04d", d + 1);
    std::vector<std::string> sentences;
    for (int slot = 0; slot < spec.relations_per_doc; ++slot) {
      if (noise(rng)) {
        const NoiseTemplate &t = set.noise[pick_noise(rng)];
        sentences.push_back(fill(t.text, "{A}", draw.any(t.a), "{B}", draw.any(t.b)));
        continue;
      }
      // Cycle through the templates so every relation type gets planted.
      const RelationTemplate &t = set.relations[next_template++ % set.relations.size()];
      const RelationType &relation = require_relation(t.relation);
      std::string subject = draw.fresh(relation.subject);
      std::string object = draw.fresh(relation.object);
      sentences.push_back(fill(t.text, "{S}", subject, "{O}", object));
      out.gold.push_back({{std::string(relation.name), subject, object, RelationSource::kSeed}, id});
    }
    out.documents.push_back(
        document_from_text(id, "synth://" + std::to_string(spec.rng_seed) + "/" + id,
                           join(sentences, " ")));
  }
  return out;
}

SeedSet template_seeds(const std::string &template_set) {
  const TemplateSet &set = require_template_set(template_set);
  SeedSet seeds;
  for (const RelationTemplate &t : set.relations) {
    std::string text(t.text);
    std::size_t s = text.find("{S}"), o = text.find("{O}");
    std::size_t from = std::min(s, o) + 3, to = std::max(s, o);
    FullBetween between{TokenKind::kWord, {}};
    for (const Sentence &sentence : tokenize(text.substr(from, to - from))) {
      for (const Token &token : sentence.tokens) between.tokens.push_back(casefold(token.text));
    }
    Pattern p{std::string(t.relation), s < o ? Direction::kSubjectFirst : Direction::kObjectFirst,
              between, PatternSource::kSeed};
    std::vector<Pattern> &list = seeds[std::string(t.relation)].patterns;
    if (std::find(list.begin(), list.end(), p) == list.end()) list.push_back(std::move(p));
  }
  return seeds;
}

std::optional<double> EvalRow::precision() const {
  if (tp + fp == 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

std::optional<double> RecallCheck::recall() const {
  if (total == 0) return std::nullopt;
  return static_cast<double>(found) / static_cast<double>(total);
}

EvalReport evaluate(std::span<const RelationInstance> extracted, std::span<const GoldRelation> gold,
                    const std::set<std::string> *labeled_docs) {
  std::set<std::string> gold_keys, found_keys;
  for (const GoldRelation &g : gold) gold_keys.insert(g.instance.key());
  std::map<std::string, std::string> relation_of;
  for (const RelationInstance &r : extracted) {
    found_keys.insert(r.key());
    relation_of[r.key()] = r.relation;
  }
  std::vector<std::pair<int, int>> counts(kRelationTypes.size());
  for (const std::string &key : found_keys) {
    const RelationType &relation = require_relation(relation_of[key]);
    auto &[tp, fp] = counts[relation.index - 1];
    (gold_keys.count(key) ? tp : fp) += 1;
  }
  std::optional<RecallCheck> recall;
  if (labeled_docs != nullptr) {
    std::set<std::string> labeled;
    for (const GoldRelation &g : gold) {
      if (labeled_docs->count(g.doc_id)) labeled.insert(g.instance.key());
    }
    RecallCheck check{0, static_cast<int>(labeled.size())};
    for (const std::string &key : labeled) check.found += found_keys.count(key) ? 1 : 0;
    recall = check;
  }
  return report_from_counts(counts, recall);
}

EvalReport report_from_counts(std::span<const std::pair<int, int>> counts,
                              std::optional<RecallCheck> recall) {
  if (counts.size() != kRelationTypes.size()) {
    throw Error("report needs one count pair per relation type");
  }
  EvalReport report;
  report.totals.relation = "Totals";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    EvalRow row{std::string(kRelationTypes[i].name), counts[i].first, counts[i].second};
    report.totals.tp += row.tp;
    report.totals.fp += row.fp;
    report.rows.push_back(std::move(row));
  }
  report.recall = recall;
  return report;
}

std::string render_report(const EvalReport &report) {
  std::vector<std::vector<std::string>> lines;
  lines.push_back({"#", "Relation", "TP", "FP", "P"});
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const EvalRow &row = report.rows[i];
    if (row.tp + row.fp == 0) {
      lines.push_back({std::to_string(i + 1), row.relation, "-", "-", "-"});
    } else {
      lines.push_back({std::to_string(i + 1), row.relation, std::to_string(row.tp),
                       std::to_string(row.fp), cell(row.precision())});
    }
  }
  lines.push_back({"", report.totals.relation, std::to_string(report.totals.tp),
                   std::to_string(report.totals.fp), cell(report.totals.precision())});
  std::vector<std::size_t> width(5, 0);
  for (const auto &line : lines) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string> &line) {
    std::string text;
    for (std::size_t c = 0; c < line.size(); ++c) {
      std::string padded = line[c];
      if (c >= 2) {
        padded.insert(0, width[c] - padded.size(), ' ');
      } else {
        padded.append(width[c] - padded.size(), ' ');
      }
      if (c > 0) text += "  ";
      text += padded;
    }
    out << text << "\n";
  };
  emit(lines.front());
  std::size_t rule = 0;
  for (std::size_t w : width) rule += w;
  rule += 2 * (width.size() - 1);
  out << std::string(rule, '-') << "\n";
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) emit(lines[i]);
  out << std::string(rule, '-') << "\n";
  emit(lines.back());
  if (report.recall) {
    out << "Recall: " << report.recall->found << " of " << report.recall->total << " = "
        << cell(report.recall->recall()) << "\n";
  }
  return out.str();
}

json report_to_json(const EvalReport &report) {
  json rows = json::array();
  for (const EvalRow &row : report.rows) rows.push_back(row_to_json(row));
  json out = {{"rows", rows}, {"totals", row_to_json(report.totals)}, {"recall", nullptr}};
  if (report.recall) {
    out["recall"] = {{"found", report.recall->found},
                     {"total", report.recall->total},
                     {"recall", optional_number(report.recall->recall())}};
  }
  return out;
}

std::vector<GoldRelation> load_gold(const std::filesystem::path &path) {
  std::string text = read_file(path.string());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw Error(path.string() + ":" + std::to_string(line_of_offset(text, e.byte)) +
                ": malformed gold file: " + e.what());
  }
  if (!j.is_array()) throw Error(path.string() + ": gold file must hold a JSON array");
  std::vector<GoldRelation> gold;
  for (std::size_t i = 0; i < j.size(); ++i) {
    try {
      GoldRelation g{relation_from_json(j[i]), ""};
      if (j[i].contains("doc_id")) g.doc_id = j[i]["doc_id"].get<std::string>();
      gold.push_back(std::move(g));
    } catch (const std::exception &e) {
      throw Error(path.string() + ": entry " + std::to_string(i) + ": " + e.what());
    }
  }
  return gold;
}

void save_gold(std::span<const GoldRelation> gold, const std::filesystem::path &path) {
  json arr = json::array();
  for (const GoldRelation &g : gold) {
    json j = relation_to_json(g.instance);
    if (!g.doc_id.empty()) j["doc_id"] = g.doc_id;
    arr.push_back(std::move(j));
  }
  write_file(path.string(), arr.dump(2) + "\n");
}

}  // namespace secrel
