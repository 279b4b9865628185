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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "secrel/base.h"
#include "secrel/bootstrap.h"
#include "secrel/corpus.h"
#include "secrel/entity.h"
#include "secrel/evalgen.h"
#include "secrel/pattern.h"
#include "secrel/relevance.h"
#include "secrel/scoring.h"

namespace secrel {
namespace {

namespace fs = std::filesystem;

const fs::path kSourceDir = SECREL_SOURCE_DIR;

// Collects failed checks for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string &what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::string s;
    for (const std::string &f : failures_) s += "\n    " + f;
    if (failed_ > failures_.size()) s += "\n    ... " + std::to_string(failed_) + " failures";
    return s;
  }
  std::string detail;

 private:
  std::vector<std::string> failures_;
  std::size_t failed_ = 0;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double rel_err(double got, double want) {
  if (want == 0.0) return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

const GazetteerSet &gazetteers() {
  static const GazetteerSet g = load_gazetteers(kSourceDir / "data" / "gazetteers");
  return g;
}

std::set<std::string> keys(const std::vector<ScoredCandidate> &list) {
  std::set<std::string> out;
  for (const auto &c : list) out.insert(c.key);
  return out;
}

void scoring_oracle(Check &c) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(1, 12), count(0, 200), total(1, 500);
  auto start = std::chrono::steady_clock::now();
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<int> f(size(rng));
    for (int &x : f) x = count(rng);
    double direct = 0;
    for (int x : f) direct += std::log(double(x) + 1.0);
    direct /= double(f.size());
    double got = score_relation(f);
    worst = std::max(worst, rel_err(got, direct));
    c.expect(rel_err(got, direct) <= 1e-12, "R_score mismatch");

    int n = total(rng);
    int m = 1 + int(rng() % n);
    double pdirect = double(m) * std::log(double(m)) / double(n);
    double pgot = score_pattern(m, n);
    worst = std::max(worst, rel_err(pgot, pdirect));
    c.expect(rel_err(pgot, pdirect) <= 1e-12, "P_score mismatch");
  }
  for (int n = 1; n <= 50; ++n) c.expect(score_pattern(1, n) == 0.0, "m=1 must give exactly 0");
  for (int n = 1; n <= 10; ++n) {
    std::vector<int> zeros(n, 0);
    c.expect(score_relation(zeros) == 0.0, "f=0 must give exactly 0");
  }
  double elapsed = seconds_since(start);
  c.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
  std::ostringstream d;
  d << "max rel err " << worst << ", " << elapsed << " s";
  c.detail = d.str();
}

void rank_invariance(Check &c) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> size(1, 40), count(0, 30), total(1, 60);
  for (int pool = 0; pool < 100; ++pool) {
    std::vector<ScoredCandidate> rel_ln, rel_2, pat_ln, pat_2;
    int n = size(rng);
    for (int i = 0; i < n; ++i) {
      std::string key = "k" + std::to_string(i);
      std::vector<int> f(1 + rng() % 4);
      for (int &x : f) x = count(rng);
      rel_ln.push_back({key, score_relation(f)});
      rel_2.push_back({key, score_relation(f, 2.0)});
      int big = total(rng);
      int m = 1 + int(rng() % big);
      pat_ln.push_back({key, score_pattern(m, big)});
      pat_2.push_back({key, score_pattern(m, big, 2.0)});
    }
    for (double fraction : {0.5, 0.8, 1.0}) {
      c.expect(keys(select_top_fraction(rel_ln, fraction)) == keys(select_top_fraction(rel_2, fraction)),
               "relation pool " + std::to_string(pool));
      c.expect(keys(select_top_fraction(pat_ln, fraction)) == keys(select_top_fraction(pat_2, fraction)),
               "pattern pool " + std::to_string(pool));
    }
  }
  c.detail = "100 pools x {0.5, 0.8, 1.0}, relations and patterns";
}

void selection(Check &c) {
  std::vector<ScoredCandidate> pool;
  for (int i = 1; i <= 10; ++i) pool.push_back({"c" + std::to_string(i), double(i)});
  std::set<std::string> want;
  for (int i = 3; i <= 10; ++i) want.insert("c" + std::to_string(i));
  c.expect(keys(select_top_fraction(pool, 0.8)) == want, "1..10 at 0.8 must accept 3..10");

  for (std::size_t n : {std::size_t(1), std::size_t(10), std::size_t(100)}) {
    std::vector<ScoredCandidate> p;
    for (std::size_t i = 0; i < n; ++i) p.push_back({"x" + std::to_string(i), double(i) + 1});
    for (double fraction : {0.02, 0.5, 0.8, 1.0}) {
      std::size_t want_n = std::size_t(std::ceil(fraction * double(n) - 1e-9));
      c.expect(select_top_fraction(p, fraction).size() == want_n,
               "accept size n=" + std::to_string(n));
      c.expect(select_queries(p, fraction).size() == want_n, "query size n=" + std::to_string(n));
    }
  }

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng() % 30;
    std::vector<ScoredCandidate> p;
    for (std::size_t i = 0; i < n; ++i) p.push_back({"k" + std::to_string(i), unit(rng)});
    std::size_t yes = rng() % n, no = (yes + 1 + rng() % (n - 1)) % n;
    p[yes].score = apply_oracle_override(p[yes].score, Answer::kYes);
    p[no].score = apply_oracle_override(p[no].score, Answer::kNo);
    for (double fraction : {0.01, 0.5, 0.8, 1.0}) {
      auto accepted = keys(select_top_fraction(p, fraction));
      c.expect(accepted.count(p[yes].key) == 1, "yes-answered candidate not accepted");
      c.expect(accepted.count(p[no].key) == 0, "no-answered candidate accepted");
    }
  }
  c.detail = "cut {3..10}; ceil at 1/10/100; override dominance on 200 pools";
}

Sentence tagged_words(const std::vector<std::pair<std::string, std::string>> &words) {
  Sentence s;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    Token t;
    t.index = int(i);
    t.text = words[i].first;
    t.pos = words[i].second;
    t.char_start = pos;
    t.char_end = pos + t.text.size();
    pos = t.char_end + 1;
    s.tokens.push_back(t);
  }
  return s;
}

EntityMention make_mention(EntityType type, int first, int last) {
  EntityMention m;
  m.type = type;
  m.span = {first, last};
  m.canonical = "e" + std::to_string(first);
  return m;
}

std::string random_tree(const Sentence &s, int lo, int hi, std::mt19937_64 &rng) {
  static const std::vector<std::string> labels = {"S", "NP", "VP", "PP"};
  if (lo == hi) return "(" + s.tokens[lo].pos + " " + s.tokens[lo].text + ")";
  int mid = lo + int(rng() % (hi - lo));
  return "(" + labels[rng() % labels.size()] + " " + random_tree(s, lo, mid, rng) + " " +
         random_tree(s, mid + 1, hi, rng) + ")";
}

// Direct reading of the matching rules for one ordered mention pair.
bool direct_match(const Pattern &p, const Sentence &s, const EntityMention &subj,
                  const EntityMention &obj) {
  const RelationType &r = require_relation(p.relation);
  if (subj.type != r.subject || obj.type != r.object || subj.span.overlaps(obj.span)) return false;
  bool subject_first = subj.span.first < obj.span.first;
  if ((p.direction == Direction::kSubjectFirst) != subject_first) return false;
  const EntityMention &left = subject_first ? subj : obj;
  const EntityMention &right = subject_first ? obj : subj;
  auto project = [&](int i, TokenKind kind) {
    return kind == TokenKind::kWord ? casefold(s.tokens[i].text) : s.tokens[i].pos;
  };
  std::vector<int> between;
  for (int i = left.span.last + 1; i < right.span.first; ++i) between.push_back(i);
  if (const auto *f = std::get_if<FullBetween>(&p.variant)) {
    if (between.empty() || between.size() != f->tokens.size()) return false;
    for (std::size_t i = 0; i < between.size(); ++i)
      if (project(between[i], f->kind) != f->tokens[i]) return false;
    return true;
  }
  if (const auto *w = std::get_if<AnchoredWindow>(&p.variant)) {
    if (between.size() < w->tokens.size()) return false;
    std::size_t off = w->anchor == Anchor::kLeftEntity ? 0 : between.size() - w->tokens.size();
    for (std::size_t i = 0; i < w->tokens.size(); ++i)
      if (project(between[off + i], w->kind) != w->tokens[i]) return false;
    return true;
  }
  return s.tree && tree_path(*s.tree, left.span.last, right.span.last) ==
                       std::get<ParsePath>(p.variant).labels;
}

void pattern_round_trip(Check &c) {
  auto docs = load_corpus(kSourceDir / "tests" / "fixtures" / "security_docs", CorpusFormat::kAuto);
  std::size_t sentences = 0, generated = 0;
  for (Document &doc : docs) {
    ensure_trees(doc);
    auto by_sentence = mentions_by_sentence(doc, tag_document(doc, gazetteers()));
    for (const Sentence &s : doc.sentences) {
      ++sentences;
      for (const RelationType &r : kRelationTypes) {
        for (const CandidatePair &pair : candidate_pairs(s, by_sentence[s.index], r)) {
          for (const Pattern &p : generate_patterns(s, pair, r)) {
            ++generated;
            bool found = false;
            for (const Occurrence &o : match_pattern(p, s, by_sentence[s.index], doc.id))
              found = found || (o.subject == pair.subject && o.object == pair.object);
            c.expect(found, "pattern " + p.key() + " misses its source in " + doc.id);
          }
        }
      }
    }
  }
  c.expect(sentences >= 50, "fixture has " + std::to_string(sentences) + " sentences");

  Sentence eggs = tagged_words({{"I", "X"}, {"like", "X"}, {"eggs", "X"}});
  attach_tree(eggs, parse_bracketed_tree("(S (NP (N I)) (VP (V like) (N eggs)))"));
  std::vector<EntityMention> em = {make_mention(EntityType::kSwVendor, 0, 0),
                                   make_mention(EntityType::kSwProduct, 2, 2)};
  const RelationType &vendor = require_relation("is_vendor_of");
  std::vector<std::string> want = {"N", "NP", "S", "VP", "N"};
  bool path_ok = false;
  for (const Pattern &p : generate_patterns(eggs, candidate_pairs(eggs, em, vendor).at(0), vendor)) {
    if (const auto *path = std::get_if<ParsePath>(&p.variant)) path_ok = path->labels == want;
  }
  c.expect(path_ok, "parse path for 'I like eggs.' is not [N, NP, S, VP, N]");

  std::mt19937_64 rng(99);
  const std::vector<std::string> words = {"ships", "fixes", "a", "the", "of", "new", "patch"};
  const std::vector<std::string> tags = {"VBZ", "DT", "IN", "JJ", "NN"};
  const std::vector<EntityType> types = {EntityType::kSwVendor, EntityType::kSwProduct,
                                         EntityType::kSwVersion};
  std::size_t compared = 0;
  for (int trial = 0; trial < 400; ++trial) {
    int n = 2 + int(rng() % 7);
    std::vector<std::pair<std::string, std::string>> tw;
    for (int i = 0; i < n; ++i) tw.emplace_back(words[rng() % words.size()], tags[rng() % tags.size()]);
    Sentence s = tagged_words(tw);
    if (rng() % 3) attach_tree(s, parse_bracketed_tree(random_tree(s, 0, n - 1, rng)));
    std::vector<EntityMention> ms;
    for (int i = 0; i < n;) {
      int len = 1 + int(rng() % 2);
      if (i + len <= n && rng() % 2) {
        ms.push_back(make_mention(types[rng() % types.size()], i, i + len - 1));
        i += len;
      } else {
        ++i;
      }
    }
    std::vector<Pattern> patterns;
    for (const RelationType &r : kRelationTypes)
      for (const CandidatePair &pair : candidate_pairs(s, ms, r))
        for (Pattern &p : generate_patterns(s, pair, r)) patterns.push_back(std::move(p));
    for (const Pattern &p : patterns) {
      std::set<std::pair<TokenSpan, TokenSpan>> expected, actual;
      for (const auto &a : ms)
        for (const auto &b : ms)
          if (&a != &b && direct_match(p, s, a, b)) expected.insert({a.span, b.span});
      for (const Occurrence &o : match_pattern(p, s, ms)) actual.insert({o.subject.span, o.object.span});
      c.expect(actual == expected, "brute-force mismatch for " + p.key());
      ++compared;
    }
  }
  c.detail = std::to_string(sentences) + " sentences, " + std::to_string(generated) +
             " generated patterns, " + std::to_string(compared) + " brute-force comparisons";
}

void entity_tagging(Check &c) {
  const std::vector<std::pair<std::string, EntityType>> cases = {
      {"Adobe", EntityType::kSwVendor},      {"Acrobat", EntityType::kSwProduct},
      {"7", EntityType::kSwVersion},         {"11.0.08", EntityType::kSwVersion},
      {"CVE-2014-1127", EntityType::kCveId}, {"MS-14-011", EntityType::kMsId},
      {"xss", EntityType::kVulnTerm},        {"sql injection", EntityType::kVulnTerm},
      {"pAlloc()", EntityType::kSwSymbol},   {"reg.exe", EntityType::kSwSymbol}};
  for (const auto &[text, type] : cases) {
    auto m = tag_document(document_from_text("t", "", text), gazetteers());
    c.expect(m.size() == 1 && m[0].type == type,
             "'" + text + "' should tag as " + std::string(entity_type_name(type)));
  }
  auto ie = tag_document(document_from_text("a", "", "IE"), gazetteers());
  auto full = tag_document(document_from_text("b", "", "Internet Explorer"), gazetteers());
  c.expect(ie.size() == 1 && full.size() == 1 && ie[0].canonical == full[0].canonical,
           "IE and Internet Explorer must share a canonical id");

  auto docs = load_corpus(kSourceDir / "tests" / "fixtures" / "security_docs", CorpusFormat::kAuto);
  c.expect(docs.size() == 20, "fixture corpus must hold 20 documents");
  std::size_t mentions = 0;
  for (const Document &d : docs) {
    auto m = tag_document(d, gazetteers());
    mentions += m.size();
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j)
        c.expect(m[i].sentence_index != m[j].sentence_index || !m[i].span.overlaps(m[j].span),
                 "overlapping mentions in " + d.id);
  }
  c.detail = "10 table strings, alias identity, " + std::to_string(mentions) +
             " mentions over 20 documents";
}

void relevance_gate(Check &c) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss(0, 0.5);
  std::uniform_int_distribution<int> count(0, 5);
  const double h = 1e-5;
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LabeledExample> data;
    for (int i = 0; i < 3 + trial % 6; ++i) {
      LabeledExample ex;
      for (std::size_t k = 0; k < kEntityTypeCount; ++k) ex.features.push_back(count(rng));
      ex.relevant = i % 2 == 0;
      data.push_back(ex);
    }
    RelevanceModel m;
    for (double &w : m.weights) w = gauss(rng);
    m.bias = gauss(rng);
    double l2 = 0.02 * (trial % 4);
    LossGradient g = loss_gradient(m, data, l2);
    auto check = [&](double analytic, double numeric) {
      double err = std::abs(analytic - numeric) /
                   std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      worst = std::max(worst, err);
      c.expect(err <= 1e-5, "gradient mismatch");
    };
    for (std::size_t i = 0; i <= m.weights.size(); ++i) {
      RelevanceModel up = m, down = m;
      double &u = i < m.weights.size() ? up.weights[i] : up.bias;
      double &d = i < m.weights.size() ? down.weights[i] : down.bias;
      u += h;
      d -= h;
      double numeric = (regularized_loss(up, data, l2) - regularized_loss(down, data, l2)) / (2 * h);
      check(i < m.weights.size() ? g.weights[i] : g.bias, numeric);
    }
  }
  std::vector<LabeledExample> toy = {{{5, 3, 0, 0, 0, 2, 0}, true}, {{0, 0, 0, 0, 0, 0, 0}, false}};
  RelevanceModel model = train(toy, TrainOptions{});
  c.expect(predict(model, toy[0].features) >= model.threshold, "positive toy document rejected");
  c.expect(predict(model, toy[1].features) < model.threshold, "negative toy document kept");
  c.expect(train(toy, TrainOptions{}) == model, "retraining is not deterministic");
  std::ostringstream d;
  d << "max gradient rel err " << worst;
  c.detail = d.str();
}

int run_tool(const std::vector<std::string> &args, std::string *err = nullptr) {
  std::istringstream in;
  std::ostringstream out, e;
  int code = run_cli(args, in, out, e);
  if (err) *err = e.str();
  return code;
}

void two_hop(Check &c, const fs::path &scratch) {
  const fs::path fixture = kSourceDir / "tests" / "fixtures" / "two_hop";
  auto run_once = [&](const std::string &name) {
    std::string err;
    int code = run_tool({"bootstrap", "--corpus", (fixture / "corpus").string(), "--gazetteers",
                         (kSourceDir / "data" / "gazetteers").string(), "--seeds",
                         (fixture / "seeds").string(), "--oracle", "auto", "--out",
                         (scratch / name).string()},
                        &err);
    c.expect(code == kExitOk, "bootstrap exited " + std::to_string(code) + ": " + err);
  };
  run_once("a");
  run_once("b");
  const std::string target = relation_key("is_vendor_of", "Adobe", "Acrobat");
  BootstrapState s = import_state(scratch / "a" / "is_vendor_of.state.json");
  int learned_at = 0;
  for (const IterationRecord &r : s.history)
    for (const CandidateRecord &cand : r.relations)
      if (cand.key == target && cand.accepted) learned_at = r.iteration;
  c.expect(learned_at >= 1 && learned_at <= 2, "(Adobe, Acrobat) not learned within 2 iterations");
  bool extracted = false;
  for (const RelationInstance &r : load_relation_list(scratch / "a" / "extracted.json"))
    extracted = extracted || r.key() == target;
  c.expect(extracted, "(Adobe, Acrobat) missing from extracted relations");
  c.expect(!s.history.empty() && s.history.back().accepted_relations() == 0 &&
               s.iteration < BootstrapConfig{}.max_iterations,
           "run did not stop at the relation-count fixpoint");
  for (const char *f : {"extracted.json", "is_vendor_of.state.json"}) {
    c.expect(read_file((scratch / "a" / f).string()) == read_file((scratch / "b" / f).string()),
             std::string("rerun differs in ") + f);
  }
  c.detail = "learned in iteration " + std::to_string(learned_at) + ", stopped after " +
             std::to_string(s.iteration) + " iterations, rerun identical";
}

SynthSpec synth_spec(double noise) {
  SynthSpec spec;
  spec.num_docs = 20;
  spec.relations_per_doc = 2;
  spec.noise_sentence_rate = noise;
  spec.rng_seed = 42;
  return spec;
}

// Answers "no" for every candidate pair in the corpus that is not gold.
AnswerBook reject_spurious(const SynthCorpus &corpus) {
  std::set<std::string> gold;
  for (const GoldRelation &g : corpus.gold) gold.insert(g.instance.key());
  std::map<std::string, Answer> answers;
  TaggedCorpus tagged = tag_corpus(corpus.documents, gazetteers());
  for (std::size_t d = 0; d < tagged.documents.size(); ++d) {
    for (const Sentence &s : tagged.documents[d].sentences) {
      for (const RelationType &r : kRelationTypes) {
        for (const CandidatePair &p : candidate_pairs(s, tagged.mentions[d][s.index], r)) {
          std::string key = relation_key(r.name, p.subject.canonical, p.object.canonical);
          if (!gold.count(key)) answers[key] = Answer::kNo;
        }
      }
    }
  }
  return AnswerBook(std::move(answers));
}

void synthetic(Check &c) {
  auto start = std::chrono::steady_clock::now();
  std::ostringstream d;
  d.precision(3);

  SynthCorpus clean = generate_corpus(synth_spec(0.0), gazetteers());
  Oracle auto_oracle = Oracle::auto_dont_know();
  PipelineResult r = run_pipeline(clean.documents, gazetteers(), nullptr, template_seeds("default"),
                                  BootstrapConfig{}, &auto_oracle);
  std::set<std::string> labeled;
  for (const Document &doc : clean.documents) labeled.insert(doc.id);
  EvalReport report = evaluate(extracted_relations(r.states), clean.gold, &labeled);
  double p = report.totals.precision().value_or(0.0);
  double rec = report.recall ? report.recall->recall().value_or(0.0) : 0.0;
  c.expect(p == 1.0, "noiseless precision " + std::to_string(p));
  c.expect(rec >= 0.9, "noiseless recall " + std::to_string(rec));
  d << "noiseless P=" << p << " R=" << rec;

  SynthCorpus noisy = generate_corpus(synth_spec(0.5), gazetteers());
  Oracle scripted = Oracle::scripted(reject_spurious(noisy));
  PipelineResult rn = run_pipeline(noisy.documents, gazetteers(), nullptr, template_seeds("default"),
                                   BootstrapConfig{}, &scripted);
  EvalReport noisy_report = evaluate(extracted_relations(rn.states), noisy.gold);
  double pn = noisy_report.totals.precision().value_or(0.0);
  c.expect(pn >= 0.9, "noisy precision " + std::to_string(pn));
  d << "; noise 0.5 P=" << pn;

  double elapsed = seconds_since(start);
  c.expect(elapsed < 30.0, "runtime " + std::to_string(elapsed) + " s");
  d << "; " << elapsed << " s";
  c.detail = d.str();
}

void eval_rendering(Check &c) {
  const std::vector<std::pair<int, int>> counts = {{45, 12}, {54, 19}, {0, 0}, {0, 0},
                                                   {2, 0},   {30, 2},  {0, 0}, {22, 0}};
  EvalReport report = report_from_counts(counts, RecallCheck{8, 33});
  std::string text = render_report(report);
  c.expect(report.totals.tp == 153 && report.totals.fp == 33, "totals are not 153/33");
  c.expect(text.find("   Totals          153  33  0.82\n") != std::string::npos,
           "totals row does not render 0.82");
  c.expect(text.find("Recall: 8 of 33 = 0.24\n") != std::string::npos, "recall does not render 0.24");
  for (const char *row : {"3  CVE_of_vuln       -   -     -\n", "4  MS_of_SW          -   -     -\n",
                          "7  symbol_of         -   -     -\n"}) {
    c.expect(text.find(row) != std::string::npos, std::string("missing dash row: ") + row);
  }
  c.detail = "P=0.82, recall 0.24, 3 dash rows";
}

}  // namespace
}  // namespace secrel

int main() {
  using secrel::Check;
  namespace fs = std::filesystem;
  fs::path scratch = fs::temp_directory_path() / ("secrel-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  const std::vector<std::pair<std::string, std::function<void(Check &)>>> criteria = {
      {"scoring matches direct evaluation", secrel::scoring_oracle},
      {"rank invariance to log base", secrel::rank_invariance},
      {"percentile and query selection", secrel::selection},
      {"pattern generation and matching round-trip", secrel::pattern_round_trip},
      {"entity tagging", secrel::entity_tagging},
      {"relevance gate training", secrel::relevance_gate},
      {"two-hop bootstrap fixture", [&](Check &c) { secrel::two_hop(c, scratch); }},
      {"synthetic end-to-end precision and recall", secrel::synthetic},
      {"evaluation report rendering", secrel::eval_rendering},
  };
  int failed = 0;
  for (const auto &[name, fn] : criteria) {
    Check c;
    try {
      fn(c);
    } catch (const std::exception &e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok() ? "PASS" : "FAIL") << "  " << name;
    if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
    std::cout << c.summary() << "\n";
    if (!c.ok()) ++failed;
  }
  fs::remove_all(scratch);
  std::cout << (criteria.size() - failed) << " of " << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
