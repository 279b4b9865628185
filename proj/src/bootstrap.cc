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

#include "secrel/bootstrap.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>

#include "secrel/base.h"

namespace secrel {
namespace {

using nlohmann::json;

// Up to three example sentences for a batch of occurrences.
std::vector<std::string> occurrence_context(std::span<const Occurrence> occurrences,
                                            const TaggedCorpus &corpus,
                                            const std::map<std::string, std::size_t> &doc_index) {
  std::vector<std::string> context;
  for (const Occurrence &o : occurrences) {
    if (context.size() == kMaxContextSentences) break;
    auto it = doc_index.find(o.doc_id);
    if (it == doc_index.end()) continue;
    const Sentence &s = corpus.documents[it->second].sentences[o.sentence_index];
    TokenSpan spans[] = {o.subject.span, o.object.span};
    std::string line = highlight(s, spans);
    if (std::find(context.begin(), context.end(), line) == context.end()) context.push_back(line);
  }
  return context;
}

std::string describe_relation(const RelationInstance &r) {
  return "(" + r.subject + ", " + r.relation + ", " + r.object + ")";
}

// Asks the oracle, treating any failure as "don't know" for every query.
std::map<std::string, Answer> ask_safely(Oracle *oracle, std::vector<OracleQuery> queries,
                                         std::ostream *log) {
  if (oracle == nullptr || queries.empty()) return {};
  try {
    return oracle->ask(std::move(queries));
  } catch (const std::exception &e) {
    if (log) *log << "oracle failed, treating queries as unanswered: " << e.what() << "\n";
    return {};
  }
}

bool name_like(const std::string &text) {
  if (text.empty() || !std::isalnum(static_cast<unsigned char>(text[0]))) return false;
  return std::any_of(text.begin(), text.end(), [](char c) {
    return std::isupper(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c));
  });
}

std::vector<std::string> between_words(const Sentence &sentence, const CandidatePair &pair) {
  std::vector<std::string> words;
  for (int i = pair.left().span.last + 1; i < pair.right().span.first; ++i) {
    words.push_back(casefold(sentence.tokens[i].text));
  }
  return words;
}

std::string pair_key(const std::string &subject, const std::string &object) {
  return casefold(subject) + "\x1f" + casefold(object);
}

std::string conflict_key(const RelationType &a, const RelationType &b, const std::string &subject,
                         const std::string &object) {
  std::string first(a.name), second(b.name);
  if (second < first) std::swap(first, second);
  return "conf:" + first + ":" + second + ":" + casefold(subject) + ":" + casefold(object);
}

// What the opposing relation's seeds say about each entity pair.
struct RivalView {
  std::set<std::string> seed_pairs;
  std::map<std::string, double> scores;  // by pair_key, for pattern nominations
};

RivalView rival_view(const RivalSeeds &rival, const TaggedCorpus &corpus,
                     const MentionTable &mentions) {
  RivalView view;
  std::set<std::string> seed_keys;
  for (const RelationInstance &r : rival.relations) {
    view.seed_pairs.insert(pair_key(r.subject, r.object));
    seed_keys.insert(r.key());
  }
  auto occ = match_corpus(rival.patterns, corpus.documents, mentions);
  std::map<std::string, int> support;  // pattern key -> f
  for (const auto &[key, list] : occ) {
    std::set<std::string> found;
    for (const Occurrence &o : list) {
      if (seed_keys.count(o.relation_key())) found.insert(o.relation_key());
    }
    support[key] = static_cast<int>(found.size());
  }
  std::map<std::string, std::set<std::string>> nominators;
  for (const auto &[key, list] : occ) {
    for (const Occurrence &o : list) {
      nominators[pair_key(o.subject.canonical, o.object.canonical)].insert(key);
    }
  }
  for (const auto &[pair, keys] : nominators) {
    std::vector<int> f;
    for (const std::string &k : keys) f.push_back(support[k]);
    view.scores[pair] = score_relation(f);
  }
  return view;
}

std::map<std::string, std::size_t> index_documents(const TaggedCorpus &corpus) {
  std::map<std::string, std::size_t> index;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) index[corpus.documents[d].id] = d;
  return index;
}

MentionTable merged_mentions(const TaggedCorpus &corpus,
                             const std::map<std::string, std::size_t> &doc_index,
                             std::span<const EntityMention> promoted) {
  MentionTable table = corpus.mentions;
  for (const EntityMention &m : promoted) {
    auto it = doc_index.find(m.doc_id);
    if (it == doc_index.end()) continue;
    auto &row = table[it->second];
    if (m.sentence_index < 0 || m.sentence_index >= static_cast<int>(row.size())) continue;
    row[m.sentence_index].push_back(m);
  }
  for (auto &doc : table) {
    for (auto &sentence : doc) std::sort(sentence.begin(), sentence.end(), mention_order);
  }
  return table;
}

bool overlaps_any(std::span<const EntityMention> mentions, const TokenSpan &span) {
  return std::any_of(mentions.begin(), mentions.end(),
                     [&](const EntityMention &m) { return m.span.overlaps(span); });
}

class Cycle {
 public:
  Cycle(BootstrapState &state, const TaggedCorpus &corpus, const BootstrapConfig &config,
        Oracle *oracle, const RivalSeeds *rival, const EngineHooks &hooks)
      : state_(state),
        corpus_(corpus),
        config_(config),
        oracle_(oracle),
        rival_(rival),
        hooks_(hooks),
        relation_(require_relation(state.relation)),
        doc_index_(index_documents(corpus)) {}

  IterationRecord run() {
    record_.iteration = ++state_.iteration;
    mentions_ = merged_mentions(corpus_, doc_index_, state_.promoted_mentions);
    learn_patterns();
    promote_entities();
    learn_relations();
    return record_;
  }

 private:
  std::optional<Answer> stored(const std::string &key) const {
    auto it = state_.answers.find(key);
    if (it == state_.answers.end()) return std::nullopt;
    return it->second;
  }

  void remember(const std::string &key, Answer answer) {
    if (answer != Answer::kDontKnow) state_.answers[key] = answer;
  }

  // Applies standing answers, queries the top unanswered candidates, then
  // accepts the top fraction. Returns the accepted keys.
  std::set<std::string> decide(QueryKind kind, std::vector<ScoredCandidate> scored,
                               const std::function<OracleQuery(const std::string &)> &make_query,
                               const std::set<std::string> &excluded,
                               std::vector<CandidateRecord> &records) {
    std::map<std::string, CandidateRecord> by_key;
    std::vector<ScoredCandidate> unanswered;
    for (const ScoredCandidate &c : scored) {
      CandidateRecord rec{c.key, c.score, std::nullopt, false, false};
      if (auto a = stored(c.key)) {
        rec.answer = a;
      } else {
        unanswered.push_back(c);
      }
      by_key[c.key] = rec;
    }
    if (oracle_ != nullptr) {
      std::vector<OracleQuery> queries;
      for (const ScoredCandidate &c : select_queries(unanswered, config_.query_fraction)) {
        OracleQuery q = make_query(c.key);
        q.kind = kind;
        q.relation = state_.relation;
        q.key = c.key;
        q.iteration = state_.iteration;
        if (q.context.empty()) continue;
        queries.push_back(std::move(q));
        by_key[c.key].queried = true;
      }
      for (const auto &[key, answer] : ask_safely(oracle_, std::move(queries), hooks_.log)) {
        by_key[key].answer = answer;
        remember(key, answer);
      }
    }
    std::vector<ScoredCandidate> pool;
    for (auto &[key, rec] : by_key) {
      if (rec.answer) rec.score = apply_oracle_override(rec.score, *rec.answer);
      if (!excluded.count(key)) pool.push_back({key, rec.score});
    }
    std::set<std::string> accepted;
    for (const ScoredCandidate &c : select_top_fraction(pool, config_.accept_fraction)) {
      accepted.insert(c.key);
      by_key[c.key].accepted = true;
    }
    for (const ScoredCandidate &c : rank_candidates(scored)) records.push_back(by_key[c.key]);
    return accepted;
  }

  void learn_patterns() {
    std::map<std::string, Pattern> candidates;
    for (std::size_t d = 0; d < corpus_.documents.size(); ++d) {
      const Document &doc = corpus_.documents[d];
      GenerationOptions gen{config_.window_cap, config_.between_cap,
                            doc.annotation_level >= AnnotationLevel::kPosTagged, false};
      for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
        const Sentence &sentence = doc.sentences[s];
        gen.parse_paths = sentence.tree.has_value() &&
                          (!sentence.fallback_tree || config_.paths_from_fallback_trees);
        for (const CandidatePair &pair : candidate_pairs(sentence, mentions_[d][s], relation_)) {
          std::string rk =
              relation_key(relation_.name, pair.subject.canonical, pair.object.canonical);
          if (!state_.known_relations.count(rk)) continue;
          for (Pattern &p : generate_patterns(sentence, pair, relation_, gen)) {
            std::string key = p.key();
            if (!state_.known_patterns.count(key)) candidates.emplace(key, std::move(p));
          }
        }
      }
    }
    std::vector<Pattern> list;
    for (const auto &[key, p] : candidates) list.push_back(p);
    auto occ = match_corpus(list, corpus_.documents, mentions_);
    std::vector<ScoredCandidate> scored;
    for (const auto &[key, occurrences] : occ) {
      std::set<std::string> known;
      for (const Occurrence &o : occurrences) {
        if (state_.known_relations.count(o.relation_key())) known.insert(o.relation_key());
      }
      if (known.empty()) continue;
      scored.push_back({key, score_pattern(static_cast<int>(known.size()),
                                           static_cast<int>(occurrences.size()))});
    }
    auto make_query = [&](const std::string &key) {
      OracleQuery q;
      q.payload = describe_pattern(candidates.at(key));
      q.context = occurrence_context(occ.at(key), corpus_, doc_index_);
      return q;
    };
    for (const std::string &key : decide(QueryKind::kPattern, scored, make_query, {},
                                         record_.patterns)) {
      state_.known_patterns.emplace(key, candidates.at(key));
    }
  }

  void promote_entities() {
    std::map<std::tuple<std::string, int, TokenSpan>, PromotionCandidate> sites;
    for (const auto &[key, pattern] : state_.known_patterns) {
      const auto *fb = std::get_if<FullBetween>(&pattern.variant);
      if (fb == nullptr || fb->kind != TokenKind::kWord) continue;
      for (std::size_t d = 0; d < corpus_.documents.size(); ++d) {
        const Document &doc = corpus_.documents[d];
        for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
          for (PromotionCandidate &c :
               find_promotions(pattern, doc.sentences[s], mentions_[d][s], doc.id)) {
            sites.emplace(std::make_tuple(c.doc_id, c.sentence_index, c.span), std::move(c));
          }
        }
      }
    }
    if (sites.empty()) return;
    // One entity query per distinct surface, for those without a standing answer.
    std::map<std::string, OracleQuery> queries;
    for (const auto &[where, c] : sites) {
      std::string key = c.key();
      if (stored(key) || queries.count(key)) continue;
      OracleQuery q;
      q.kind = QueryKind::kEntity;
      q.relation = state_.relation;
      q.key = key;
      q.payload = c.surface + " as " + std::string(entity_type_name(c.type));
      const Sentence &sentence = corpus_.documents[doc_index_.at(c.doc_id)].sentences[c.sentence_index];
      TokenSpan spans[] = {c.span};
      q.context = {highlight(sentence, spans)};
      q.iteration = state_.iteration;
      queries.emplace(key, std::move(q));
    }
    std::map<std::string, Answer> answers;
    if (oracle_ != nullptr) {
      std::vector<OracleQuery> batch;
      for (auto &[key, q] : queries) batch.push_back(std::move(q));
      answers = ask_safely(oracle_, std::move(batch), hooks_.log);
      for (const auto &[key, answer] : answers) remember(key, answer);
    }
    for (const auto &[where, c] : sites) {
      std::optional<Answer> answer = stored(c.key());
      if (!answer) {
        auto it = answers.find(c.key());
        if (it != answers.end()) answer = it->second;
      }
      std::optional<EntityMention> m = promote_entity(c, state_.known_patterns, answer);
      if (!m) continue;
      auto &row = mentions_[doc_index_.at(c.doc_id)][c.sentence_index];
      if (overlaps_any(row, m->span)) continue;
      row.push_back(*m);
      std::sort(row.begin(), row.end(), mention_order);
      state_.promoted_mentions.push_back(*m);
      ++record_.promotions;
    }
  }

  void learn_relations() {
    std::vector<Pattern> known;
    for (const auto &[key, p] : state_.known_patterns) known.push_back(p);
    auto occ = match_corpus(known, corpus_.documents, mentions_);

    std::map<std::string, int> support;
    for (const auto &[key, list] : occ) {
      std::set<std::string> found;
      for (const Occurrence &o : list) {
        if (state_.known_relations.count(o.relation_key())) found.insert(o.relation_key());
      }
      support[key] = static_cast<int>(found.size());
    }

    struct Nominee {
      RelationInstance instance;
      std::set<std::string> patterns;
      std::vector<Occurrence> occurrences;
    };
    std::map<std::string, Nominee> nominees;
    for (const auto &[key, list] : occ) {
      for (const Occurrence &o : list) {
        std::string rk = o.relation_key();
        if (state_.known_relations.count(rk)) continue;
        Nominee &n = nominees[rk];
        if (n.patterns.empty()) {
          n.instance = {std::string(relation_.name), o.subject.canonical, o.object.canonical,
                        RelationSource::kBootstrap};
        }
        n.patterns.insert(key);
        n.occurrences.push_back(o);
      }
    }
    std::vector<ScoredCandidate> scored;
    for (auto &[rk, n] : nominees) {
      std::sort(n.occurrences.begin(), n.occurrences.end(), [](const Occurrence &a, const Occurrence &b) {
        return std::tie(a.doc_id, a.sentence_index, a.subject.span, a.object.span) <
               std::tie(b.doc_id, b.sentence_index, b.subject.span, b.object.span);
      });
      std::vector<int> f;
      for (const std::string &k : n.patterns) f.push_back(support[k]);
      scored.push_back({rk, score_relation(f)});
    }

    std::set<std::string> losers = resolve_conflicts(scored, nominees);

    auto make_query = [&](const std::string &key) {
      OracleQuery q;
      const Nominee &n = nominees.at(key);
      q.payload = describe_relation(n.instance);
      q.context = occurrence_context(n.occurrences, corpus_, doc_index_);
      return q;
    };
    for (const std::string &key :
         decide(QueryKind::kRelation, scored, make_query, losers, record_.relations)) {
      RelationInstance instance = nominees.at(key).instance;
      if (stored(key) == Answer::kYes) instance.provenance = RelationSource::kUser;
      state_.known_relations.emplace(key, std::move(instance));
    }
  }

  template <typename Nominees>
  std::set<std::string> resolve_conflicts(const std::vector<ScoredCandidate> &scored,
                                          const Nominees &nominees) {
    std::set<std::string> losers;
    if (rival_ == nullptr || rival_->relation == nullptr) return losers;
    RivalView view = rival_view(*rival_, corpus_, mentions_);
    const RelationType &rival = *rival_->relation;
    const bool own_conservative = is_conservative_relation(relation_);

    struct Contest {
      std::string key;
      ConflictCandidate own, other;
      bool rival_seed;
      const Occurrence *where;
    };
    std::vector<Contest> contests;
    for (const ScoredCandidate &c : scored) {
      const auto &n = nominees.at(c.key);
      std::string pk = pair_key(n.instance.subject, n.instance.object);
      bool seeded = view.seed_pairs.count(pk) > 0;
      auto it = view.scores.find(pk);
      if (!seeded && it == view.scores.end()) continue;
      RelationInstance other{std::string(rival.name), n.instance.subject, n.instance.object,
                             RelationSource::kBootstrap};
      contests.push_back({c.key, {n.instance, c.score},
                          {other, it == view.scores.end() ? 0.0 : it->second}, seeded,
                          &n.occurrences.front()});
    }
    if (contests.empty()) return losers;

    // Ask about every contest not already settled by a rival seed or a
    // standing answer.
    std::map<std::string, Answer> answers;
    if (oracle_ != nullptr) {
      std::vector<OracleQuery> queries;
      std::set<std::string> asked;
      for (const Contest &c : contests) {
        if (c.rival_seed) continue;
        std::string key = conflict_key(relation_, rival, c.own.instance.subject,
                                       c.own.instance.object);
        if (stored(key) || asked.count(key)) continue;
        asked.insert(key);
        const RelationInstance &cons = own_conservative ? c.own.instance : c.other.instance;
        const RelationInstance &alt = own_conservative ? c.other.instance : c.own.instance;
        OracleQuery q;
        q.kind = QueryKind::kConflict;
        q.relation = state_.relation;
        q.key = key;
        q.payload = describe_relation(cons) + " vs " + describe_relation(alt);
        q.competing = {cons.relation, alt.relation};
        Occurrence one = *c.where;
        q.context = occurrence_context(std::span<const Occurrence>(&one, 1), corpus_, doc_index_);
        q.iteration = state_.iteration;
        queries.push_back(std::move(q));
      }
      answers = ask_safely(oracle_, std::move(queries), hooks_.log);
      for (const auto &[key, answer] : answers) remember(key, answer);
    }

    for (const Contest &c : contests) {
      std::string chosen, reason;
      if (c.rival_seed) {
        chosen = std::string(rival.name);
        reason = "rival_seed";
      } else {
        std::string key = conflict_key(relation_, rival, c.own.instance.subject,
                                       c.own.instance.object);
        std::optional<Answer> answer = stored(key);
        if (!answer) {
          auto it = answers.find(key);
          if (it != answers.end()) answer = it->second;
        }
        const Document &doc = corpus_.documents[doc_index_.at(c.where->doc_id)];
        const Sentence &sentence = doc.sentences[c.where->sentence_index];
        CandidatePair pair{c.where->subject, c.where->object,
                           c.where->subject.span.first < c.where->object.span.first
                               ? Direction::kSubjectFirst
                               : Direction::kObjectFirst};
        std::vector<std::string> words = between_words(sentence, pair);
        ConflictResolution r =
            resolve_conflict(c.own, c.other, words, answer, config_.negation_cues);
        chosen = r.chosen.relation;
        reason = r.reason;
      }
      record_.conflicts.push_back({c.key, std::string(rival.name), chosen, reason});
      if (chosen != relation_.name) losers.insert(c.key);
    }
    return losers;
  }

  BootstrapState &state_;
  const TaggedCorpus &corpus_;
  const BootstrapConfig &config_;
  Oracle *oracle_;
  const RivalSeeds *rival_;
  const EngineHooks &hooks_;
  const RelationType &relation_;
  std::map<std::string, std::size_t> doc_index_;
  MentionTable mentions_;
  IterationRecord record_;
};

void check_fraction_field(const std::string &field, double value) {
  if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
    throw ConfigError(field, "must be a number in [0, 1]");
  }
}

std::optional<OracleMode> parse_oracle_mode(std::string_view name) {
  for (OracleMode m : {OracleMode::kInteractive, OracleMode::kScripted, OracleMode::kService,
                       OracleMode::kAutoDontKnow}) {
    if (oracle_mode_name(m) == name) return m;
  }
  return std::nullopt;
}

json candidate_to_json(const CandidateRecord &c) {
  return {{"key", c.key},
          {"score", c.score},
          {"queried", c.queried},
          {"answer", c.answer ? json(answer_name(*c.answer)) : json(nullptr)},
          {"accepted", c.accepted}};
}

CandidateRecord candidate_from_json(const json &j) {
  CandidateRecord c;
  c.key = j.at("key").get<std::string>();
  c.score = j.at("score").get<double>();
  c.queried = j.at("queried").get<bool>();
  c.accepted = j.at("accepted").get<bool>();
  if (!j.at("answer").is_null()) {
    c.answer = parse_answer(j.at("answer").get<std::string>());
    if (!c.answer) throw Error("bad answer for candidate '" + c.key + "'");
  }
  return c;
}

json candidates_to_json(const std::vector<CandidateRecord> &list) {
  json arr = json::array();
  std::size_t queried = 0, accepted = 0;
  for (const CandidateRecord &c : list) {
    arr.push_back(candidate_to_json(c));
    queried += c.queried;
    accepted += c.accepted;
  }
  return {{"nominated", list.size()},
          {"queried", queried},
          {"accepted", accepted},
          {"candidates", arr}};
}

std::vector<CandidateRecord> candidates_from_json(const json &j) {
  std::vector<CandidateRecord> list;
  for (const json &c : j.at("candidates")) list.push_back(candidate_from_json(c));
  return list;
}

}  // namespace

void BootstrapConfig::validate() const {
  check_fraction_field("accept_fraction", accept_fraction);
  check_fraction_field("query_fraction", query_fraction);
  if (max_iterations < 1) throw ConfigError("max_iterations", "must be at least 1");
  if (window_cap < 1) throw ConfigError("window_cap", "must be at least 1");
  if (between_cap < 1) throw ConfigError("between_cap", "must be at least 1");
  if (!std::isfinite(relevance_threshold) || relevance_threshold <= 0.0 ||
      relevance_threshold >= 1.0) {
    throw ConfigError("relevance_threshold", "must lie strictly between 0 and 1");
  }
}

json config_to_json(const BootstrapConfig &c) {
  return {{"accept_fraction", c.accept_fraction},
          {"query_fraction", c.query_fraction},
          {"max_iterations", c.max_iterations},
          {"window_cap", c.window_cap},
          {"between_cap", c.between_cap},
          {"oracle_mode", oracle_mode_name(c.oracle_mode)},
          {"relevance_threshold", c.relevance_threshold},
          {"negation_cues", c.negation_cues},
          {"paths_from_fallback_trees", c.paths_from_fallback_trees}};
}

BootstrapConfig config_from_json(const json &j) {
  if (!j.is_object()) throw ConfigError("config", "must be a JSON object");
  BootstrapConfig c;
  auto number = [&](const char *field, double &out) {
    if (!j.contains(field)) return;
    if (!j[field].is_number()) throw ConfigError(field, "must be a number");
    out = j[field].get<double>();
  };
  auto integer = [&](const char *field, int &out) {
    if (!j.contains(field)) return;
    if (!j[field].is_number_integer()) throw ConfigError(field, "must be an integer");
    out = j[field].get<int>();
  };
  for (const auto &[key, value] : j.items()) {
    static const std::set<std::string> known = {
        "accept_fraction",     "query_fraction", "max_iterations", "window_cap", "between_cap",
        "oracle_mode",         "relevance_threshold", "negation_cues",
        "paths_from_fallback_trees"};
    if (!known.count(key)) throw ConfigError(key, "unknown configuration field");
  }
  number("accept_fraction", c.accept_fraction);
  number("query_fraction", c.query_fraction);
  integer("max_iterations", c.max_iterations);
  integer("window_cap", c.window_cap);
  integer("between_cap", c.between_cap);
  number("relevance_threshold", c.relevance_threshold);
  if (j.contains("oracle_mode")) {
    std::optional<OracleMode> mode;
    if (j["oracle_mode"].is_string()) mode = parse_oracle_mode(j["oracle_mode"].get<std::string>());
    if (!mode) throw ConfigError("oracle_mode", "must be interactive, scripted, serve or auto");
    c.oracle_mode = *mode;
  }
  if (j.contains("negation_cues")) {
    const json &cues = j["negation_cues"];
    if (!cues.is_array()) throw ConfigError("negation_cues", "must be an array of strings");
    c.negation_cues.clear();
    for (const json &cue : cues) {
      if (!cue.is_string()) throw ConfigError("negation_cues", "must be an array of strings");
      c.negation_cues.push_back(casefold(cue.get<std::string>()));
    }
  }
  if (j.contains("paths_from_fallback_trees")) {
    if (!j["paths_from_fallback_trees"].is_boolean()) {
      throw ConfigError("paths_from_fallback_trees", "must be true or false");
    }
    c.paths_from_fallback_trees = j["paths_from_fallback_trees"].get<bool>();
  }
  c.validate();
  return c;
}

BootstrapConfig load_config(const std::filesystem::path &path) {
  std::string text = read_file(path.string());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw Error(path.string() + ":" + std::to_string(line_of_offset(text, e.byte)) +
                ": malformed config: " + e.what());
  }
  return config_from_json(j);
}

std::size_t IterationRecord::accepted_relations() const {
  return std::count_if(relations.begin(), relations.end(),
                       [](const CandidateRecord &c) { return c.accepted; });
}

BootstrapState initial_state(const RelationType &relation, const RelationSeeds &seeds) {
  BootstrapState state;
  state.relation = std::string(relation.name);
  for (const Pattern &p : seeds.patterns) {
    if (p.relation != relation.name) throw Error("seed pattern for another relation: " + p.key());
    state.known_patterns.emplace(p.key(), p);
  }
  for (const RelationInstance &r : seeds.relations) {
    if (r.relation != relation.name) throw Error("seed relation for another relation: " + r.key());
    state.known_relations.emplace(r.key(), r);
  }
  return state;
}

TaggedCorpus tag_corpus(std::vector<Document> documents, const GazetteerSet &gazetteers) {
  std::vector<std::vector<EntityMention>> per_doc;
  for (const Document &doc : documents) per_doc.push_back(tag_document(doc, gazetteers));
  TaggedCorpus corpus;
  corpus.mentions = build_mention_table(documents, per_doc);
  corpus.documents = std::move(documents);
  return corpus;
}

BootstrapState bootstrap_relation(BootstrapState state, const TaggedCorpus &corpus,
                                  const BootstrapConfig &config, Oracle *oracle,
                                  const RivalSeeds *rival, const EngineHooks &hooks) {
  config.validate();
  if (corpus.documents.empty()) return state;
  for (int i = 0; i < config.max_iterations; ++i) {
    Cycle cycle(state, corpus, config, oracle, rival, hooks);
    IterationRecord record = cycle.run();
    state.history.push_back(record);
    if (hooks.log) {
      auto count = [](const std::vector<CandidateRecord> &list, bool CandidateRecord::*flag) {
        return std::count_if(list.begin(), list.end(),
                             [&](const CandidateRecord &c) { return c.*flag; });
      };
      *hooks.log << "iteration " << record.iteration << " " << state.relation
                 << ": patterns nominated=" << record.patterns.size()
                 << " queried=" << count(record.patterns, &CandidateRecord::queried)
                 << " accepted=" << count(record.patterns, &CandidateRecord::accepted)
                 << "; relations nominated=" << record.relations.size()
                 << " queried=" << count(record.relations, &CandidateRecord::queried)
                 << " accepted=" << count(record.relations, &CandidateRecord::accepted)
                 << "; conflicts=" << record.conflicts.size()
                 << " promotions=" << record.promotions << "\n";
    }
    if (hooks.on_iteration) hooks.on_iteration(state);
    if (record.accepted_relations() == 0) break;
  }
  return state;
}

ConflictResolution resolve_conflict(const ConflictCandidate &a, const ConflictCandidate &b,
                                    std::span<const std::string> between_words,
                                    std::optional<Answer> answer,
                                    std::span<const std::string> negation_cues) {
  const RelationType &ra = require_relation(a.instance.relation);
  const RelationType &rb = require_relation(b.instance.relation);
  if (is_conservative_relation(ra) == is_conservative_relation(rb)) {
    throw Error("resolve_conflict: candidates must be a conflicting pair");
  }
  const ConflictCandidate &cons = is_conservative_relation(ra) ? a : b;
  const ConflictCandidate &other = is_conservative_relation(ra) ? b : a;
  if (answer == Answer::kYes) return {cons.instance, "oracle"};
  if (answer == Answer::kNo) return {other.instance, "oracle"};
  for (const std::string &w : between_words) {
    std::string word = casefold(w);
    for (const std::string &cue : negation_cues) {
      if (word == casefold(cue)) return {cons.instance, "cue"};
    }
  }
  if (std::abs(cons.score - other.score) <=
      kScoreTieTolerance * std::max(std::abs(cons.score), std::abs(other.score))) {
    return {cons.instance, "tie"};
  }
  return {cons.score > other.score ? cons.instance : other.instance, "score"};
}

ConflictResolution resolve_conflict(const ConflictCandidate &a, const ConflictCandidate &b,
                                    const Sentence &sentence, const CandidatePair &pair,
                                    Oracle *oracle, const BootstrapConfig &config) {
  const RelationType &ra = require_relation(a.instance.relation);
  const RelationType &rb = require_relation(b.instance.relation);
  const ConflictCandidate &cons = is_conservative_relation(ra) ? a : b;
  const ConflictCandidate &other = is_conservative_relation(ra) ? b : a;
  std::optional<Answer> answer;
  if (oracle != nullptr) {
    OracleQuery q;
    q.kind = QueryKind::kConflict;
    q.relation = a.instance.relation;
    q.key = conflict_key(ra, rb, a.instance.subject, a.instance.object);
    q.payload = describe_relation(cons.instance) + " vs " + describe_relation(other.instance);
    q.competing = {cons.instance.relation, other.instance.relation};
    TokenSpan spans[] = {pair.subject.span, pair.object.span};
    q.context = {highlight(sentence, spans)};
    std::string key = q.key;
    auto answers = ask_safely(oracle, {q}, nullptr);
    auto it = answers.find(key);
    if (it != answers.end()) answer = it->second;
  }
  std::vector<std::string> words = between_words(sentence, pair);
  return resolve_conflict(a, b, words, answer, config.negation_cues);
}

std::string PromotionCandidate::key() const {
  return "ent:" + std::string(entity_type_name(type)) + ":" + casefold(surface);
}

std::vector<PromotionCandidate> find_promotions(const Pattern &pattern, const Sentence &sentence,
                                                std::span<const EntityMention> mentions,
                                                const std::string &doc_id) {
  std::vector<PromotionCandidate> out;
  const auto *fb = std::get_if<FullBetween>(&pattern.variant);
  if (fb == nullptr || fb->kind != TokenKind::kWord || fb->tokens.empty()) return out;
  const RelationType &relation = require_relation(pattern.relation);
  const bool subject_first = pattern.direction == Direction::kSubjectFirst;
  const EntityType left_type = subject_first ? relation.subject : relation.object;
  const EntityType right_type = subject_first ? relation.object : relation.subject;
  const int n = static_cast<int>(sentence.tokens.size());
  const int k = static_cast<int>(fb->tokens.size());

  auto tagged = [&](int i) {
    return std::any_of(mentions.begin(), mentions.end(),
                       [&](const EntityMention &m) { return m.span.first <= i && i <= m.span.last; });
  };
  auto free_name = [&](int i) {
    return i >= 0 && i < n && !tagged(i) && name_like(sentence.tokens[i].text);
  };
  auto between_at = [&](int start) {
    if (start < 0 || start + k > n) return false;
    for (int j = 0; j < k; ++j) {
      if (casefold(sentence.tokens[start + j].text) != fb->tokens[j]) return false;
    }
    return true;
  };
  auto emit = [&](TokenSpan span, EntityType type) {
    std::vector<std::string> words;
    for (int i = span.first; i <= span.last; ++i) words.push_back(sentence.tokens[i].text);
    out.push_back({pattern.key(), doc_id, sentence.index, span, type, join(words, " ")});
  };

  for (const EntityMention &m : mentions) {
    if (m.type == left_type && is_gazetteer_type(right_type) && between_at(m.span.last + 1)) {
      int first = m.span.last + 1 + k;
      if (free_name(first)) {
        int last = first;
        while (last - first + 1 < 3 && free_name(last + 1)) ++last;
        emit({first, last}, right_type);
      }
    }
    if (m.type == right_type && is_gazetteer_type(left_type) && between_at(m.span.first - k)) {
      int last = m.span.first - k - 1;
      if (free_name(last)) {
        int first = last;
        while (last - first + 1 < 3 && free_name(first - 1)) --first;
        emit({first, last}, left_type);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const PromotionCandidate &a, const PromotionCandidate &b) {
    return std::tie(a.span, a.type) < std::tie(b.span, b.type);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const PromotionCandidate &a, const PromotionCandidate &b) {
                          return a.span == b.span && a.type == b.type;
                        }),
            out.end());
  return out;
}

std::optional<EntityMention> promote_entity(const PromotionCandidate &candidate,
                                            const std::map<std::string, Pattern> &known_patterns,
                                            std::optional<Answer> answer) {
  if (answer == Answer::kNo) return std::nullopt;
  if (answer != Answer::kYes && !known_patterns.count(candidate.pattern_key)) return std::nullopt;
  EntityMention m;
  m.doc_id = candidate.doc_id;
  m.sentence_index = candidate.sentence_index;
  m.span = candidate.span;
  m.type = candidate.type;
  m.canonical = candidate.surface;
  m.provenance = answer == Answer::kYes ? MentionSource::kUser : MentionSource::kBootstrap;
  return m;
}

PipelineResult run_pipeline(std::vector<Document> documents, const GazetteerSet &gazetteers,
                            const RelevanceModel *relevance, const SeedSet &seeds,
                            const BootstrapConfig &config, Oracle *oracle,
                            const std::set<std::string> *only, const EngineHooks &hooks) {
  config.validate();
  if (only != nullptr) {
    for (const std::string &name : *only) require_relation(name);
  }
  for (const auto &[name, s] : seeds) require_relation(name);

  PipelineResult result;
  std::vector<Document> kept;
  std::vector<std::vector<EntityMention>> kept_mentions;
  std::optional<RelevanceModel> model;
  if (relevance != nullptr) {
    model = *relevance;
    model->threshold = config.relevance_threshold;
  }
  for (Document &doc : documents) {
    std::vector<EntityMention> mentions = tag_document(doc, gazetteers);
    if (model && predict(*model, entity_type_counts(mentions)) < model->threshold) {
      result.dropped.push_back(doc.id);
      continue;
    }
    result.kept.push_back(doc.id);
    ensure_trees(doc);
    kept.push_back(std::move(doc));
    kept_mentions.push_back(std::move(mentions));
  }
  TaggedCorpus corpus;
  corpus.mentions = build_mention_table(kept, kept_mentions);
  corpus.documents = std::move(kept);

  for (const RelationType &relation : kRelationTypes) {
    std::string name(relation.name);
    if (only != nullptr && !only->count(name)) continue;
    auto it = seeds.find(name);
    if (it == seeds.end() || it->second.empty()) {
      result.warnings.push_back("no seeds for " + name + "; skipped");
      continue;
    }
    RivalSeeds rival;
    const RivalSeeds *rival_ptr = nullptr;
    if (const RelationType *other = conflicting_relation(relation)) {
      rival.relation = other;
      auto r = seeds.find(std::string(other->name));
      if (r != seeds.end()) {
        rival.patterns = r->second.patterns;
        rival.relations = r->second.relations;
      }
      rival_ptr = &rival;
    }
    result.states[name] = bootstrap_relation(initial_state(relation, it->second), corpus, config,
                                             oracle, rival_ptr, hooks);
  }
  return result;
}

std::vector<RelationInstance> extracted_relations(
    const std::map<std::string, BootstrapState> &states) {
  std::vector<RelationInstance> out;
  for (const RelationType &relation : kRelationTypes) {
    auto it = states.find(std::string(relation.name));
    if (it == states.end()) continue;
    for (const auto &[key, r] : it->second.known_relations) out.push_back(r);
  }
  return out;
}

json state_to_json(const BootstrapState &state) {
  json relations = json::array();
  for (const auto &[key, r] : state.known_relations) relations.push_back(relation_to_json(r));
  json patterns = json::array();
  for (const auto &[key, p] : state.known_patterns) patterns.push_back(pattern_to_json(p));
  json mentions = json::array();
  for (const EntityMention &m : state.promoted_mentions) mentions.push_back(mention_to_json(m));
  json answers = json::object();
  for (const auto &[key, a] : state.answers) answers[key] = answer_name(a);
  json history = json::array();
  for (const IterationRecord &rec : state.history) {
    json conflicts = json::array();
    for (const ConflictRecord &c : rec.conflicts) {
      conflicts.push_back({{"key", c.key},
                           {"rival_relation", c.rival_relation},
                           {"chosen", c.chosen},
                           {"reason", c.reason}});
    }
    history.push_back({{"iteration", rec.iteration},
                       {"patterns", candidates_to_json(rec.patterns)},
                       {"relations", candidates_to_json(rec.relations)},
                       {"conflicts", conflicts},
                       {"promotions", rec.promotions}});
  }
  return {{"schema_version", kStateSchemaVersion},
          {"relation", state.relation},
          {"iteration", state.iteration},
          {"known_relations", relations},
          {"known_patterns", patterns},
          {"promoted_mentions", mentions},
          {"answers", answers},
          {"history", history}};
}

BootstrapState state_from_json(const json &j) {
  try {
    if (!j.is_object()) throw Error("state must be a JSON object");
    int version = j.at("schema_version").get<int>();
    if (version != kStateSchemaVersion) {
      throw Error("unsupported schema_version " + std::to_string(version) + " (expected " +
                  std::to_string(kStateSchemaVersion) + ")");
    }
    BootstrapState state;
    state.relation = j.at("relation").get<std::string>();
    if (find_relation(state.relation) == nullptr) {
      throw Error("unknown relation '" + state.relation + "'");
    }
    state.iteration = j.at("iteration").get<int>();
    for (const json &r : j.at("known_relations")) {
      RelationInstance instance = relation_from_json(r);
      if (instance.relation != state.relation) {
        throw Error("known relation " + instance.key() + " belongs to another relation type");
      }
      state.known_relations.emplace(instance.key(), instance);
    }
    for (const json &p : j.at("known_patterns")) {
      Pattern pattern = pattern_from_json(p);
      if (pattern.relation != state.relation) {
        throw Error("known pattern " + pattern.key() + " belongs to another relation type");
      }
      state.known_patterns.emplace(pattern.key(), pattern);
    }
    for (const json &m : j.at("promoted_mentions")) state.promoted_mentions.push_back(mention_from_json(m));
    for (const auto &[key, value] : j.at("answers").items()) {
      std::optional<Answer> a = parse_answer(value.get<std::string>());
      if (!a) throw Error("bad answer for '" + key + "'");
      state.answers[key] = *a;
    }
    for (const json &h : j.at("history")) {
      IterationRecord rec;
      rec.iteration = h.at("iteration").get<int>();
      rec.patterns = candidates_from_json(h.at("patterns"));
      rec.relations = candidates_from_json(h.at("relations"));
      for (const json &c : h.at("conflicts")) {
        rec.conflicts.push_back({c.at("key").get<std::string>(),
                                 c.at("rival_relation").get<std::string>(),
                                 c.at("chosen").get<std::string>(),
                                 c.at("reason").get<std::string>()});
      }
      rec.promotions = h.at("promotions").get<int>();
      state.history.push_back(std::move(rec));
    }
    return state;
  } catch (const json::exception &e) {
    throw Error(std::string("malformed state: ") + e.what());
  }
}

void export_state(const BootstrapState &state, const std::filesystem::path &path) {
  write_file(path.string(), state_to_json(state).dump(2) + "\n");
}

BootstrapState import_state(const std::filesystem::path &path) {
  std::string text = read_file(path.string());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw Error(path.string() + ":" + std::to_string(line_of_offset(text, e.byte)) +
                ": malformed state: " + e.what());
  }
  try {
    return state_from_json(j);
  } catch (const Error &e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string describe_pattern(const Pattern &pattern) {
  const RelationType &relation = require_relation(pattern.relation);
  const bool subject_first = pattern.direction == Direction::kSubjectFirst;
  std::string left = "{" + std::string(entity_type_name(subject_first ? relation.subject : relation.object)) + "}";
  std::string right = "{" + std::string(entity_type_name(subject_first ? relation.object : relation.subject)) + "}";
  return std::visit(
      [&](const auto &v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FullBetween>) {
          std::string body = join(v.tokens, " ");
          if (v.kind == TokenKind::kPos) body = "<" + body + ">";
          return left + " " + body + " " + right;
        } else if constexpr (std::is_same_v<T, AnchoredWindow>) {
          std::string body = join(v.tokens, " ");
          if (v.kind == TokenKind::kPos) body = "<" + body + ">";
          return v.anchor == Anchor::kLeftEntity ? left + " " + body + " ... " + right
                                                 : left + " ... " + body + " " + right;
        } else {
          return left + " path(" + join(v.labels, " ") + ") " + right;
        }
      },
      pattern.variant);
}

std::string highlight(const Sentence &sentence, std::span<const TokenSpan> spans) {
  std::string out;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const int t = static_cast<int>(i);
    if (!out.empty()) out += ' ';
    for (const TokenSpan &s : spans) {
      if (s.first == t) out += "[[";
    }
    out += sentence.tokens[i].text;
    for (const TokenSpan &s : spans) {
      if (s.last == t) out += "]]";
    }
  }
  return out;
}

}  // namespace secrel
