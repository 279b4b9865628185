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

#include "cli.h"

#include <chrono>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "secrel/base.h"
#include "secrel/bootstrap.h"
#include "secrel/corpus.h"
#include "secrel/entity.h"
#include "secrel/evalgen.h"
#include "secrel/oracle.h"
#include "secrel/pattern.h"
#include "secrel/relevance.h"
#include "secrel/service.h"

namespace secrel {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct TagArgs {
  std::string corpus, gazetteers, out;
};

struct TrainArgs {
  std::string corpus, gazetteers, out;
  TrainOptions options;
};

struct BootstrapArgs {
  std::string corpus, gazetteers, seeds, config, oracle, out, relevance_model, ui_dir;
  std::string bind = "127.0.0.1:8080";
  std::vector<std::string> only;
  std::optional<double> answer_timeout;
};

struct EvalArgs {
  std::string extracted, gold;
  std::vector<std::string> labeled_docs;
  bool as_json = false;
};

struct GenerateArgs {
  std::string gazetteers, out;
  SynthSpec spec = [] {
    SynthSpec s;
    s.num_docs = 20;
    s.relations_per_doc = 2;
    s.rng_seed = 42;
    return s;
  }();
};

json counts_to_json(const EntityCounts &counts) {
  json out = json::object();
  for (EntityType type : kAllEntityTypes) {
    out[std::string(entity_type_name(type))] = counts[static_cast<std::size_t>(type)];
  }
  return out;
}

int cmd_tag(const TagArgs &args, std::ostream &out) {
  GazetteerSet gazetteers = load_gazetteers(args.gazetteers);
  std::vector<Document> docs = load_corpus(args.corpus, CorpusFormat::kAuto);
  json documents = json::array();
  for (const Document &doc : docs) {
    std::vector<EntityMention> mentions = tag_document(doc, gazetteers);
    json list = json::array();
    for (const EntityMention &m : mentions) list.push_back(mention_to_json(m));
    documents.push_back(
        {{"id", doc.id}, {"mentions", list}, {"counts", counts_to_json(entity_type_counts(mentions))}});
  }
  write_file(args.out, json{{"documents", documents}}.dump(2) + "\n");
  out << "tagged " << docs.size() << " documents -> " << args.out << "\n";
  return kExitOk;
}

int cmd_train(const TrainArgs &args, std::ostream &out, std::ostream &err) {
  GazetteerSet gazetteers = load_gazetteers(args.gazetteers);
  std::vector<Document> docs = load_corpus(args.corpus, CorpusFormat::kAuto);
  EntityCountFeatures features;
  std::vector<LabeledExample> data;
  for (const Document &doc : docs) {
    if (!doc.relevance_label) {
      err << "warning: " << doc.id << " has no relevance_label; skipped\n";
      continue;
    }
    data.push_back({features.extract(doc, tag_document(doc, gazetteers)), *doc.relevance_label});
  }
  RelevanceModel model = train(data, args.options);
  save_model(model, args.out);
  out << "trained on " << data.size() << " documents -> " << args.out << "\n";
  return kExitOk;
}

Oracle make_oracle(const std::string &spec, OracleMode fallback, std::istream &in,
                   std::ostream &err, std::optional<double> timeout_seconds) {
  std::string mode = spec.empty() ? std::string(oracle_mode_name(fallback)) : spec;
  if (mode == "auto") return Oracle::auto_dont_know();
  if (mode == "interactive") return Oracle::interactive(in, err);
  if (mode == "serve") {
    std::optional<std::chrono::milliseconds> timeout;
    if (timeout_seconds) {
      timeout = std::chrono::milliseconds(static_cast<long long>(*timeout_seconds * 1000.0));
    }
    return Oracle::service(timeout);
  }
  if (mode.rfind("scripted:", 0) == 0) return Oracle::scripted(AnswerBook::load(mode.substr(9)));
  if (mode == "scripted") throw Error("--oracle=scripted needs an answers file: scripted:PATH");
  throw Error("unknown oracle mode '" + mode + "' (interactive, scripted:PATH, serve or auto)");
}

int cmd_bootstrap(const BootstrapArgs &args, std::istream &in, std::ostream &out,
                  std::ostream &err) {
  BootstrapConfig config;
  if (!args.config.empty()) config = load_config(args.config);
  GazetteerSet gazetteers = load_gazetteers(args.gazetteers);
  SeedSet seeds = load_seeds(args.seeds);
  if (seeds.empty()) throw Error(args.seeds + ": no seed files found");
  std::vector<Document> docs = load_corpus(args.corpus, CorpusFormat::kAuto);
  std::optional<RelevanceModel> model;
  if (!args.relevance_model.empty()) model = load_model(args.relevance_model);
  std::set<std::string> only(args.only.begin(), args.only.end());

  Oracle oracle = make_oracle(args.oracle, config.oracle_mode, in, err, args.answer_timeout);
  RunMonitor monitor;
  std::unique_ptr<Service> service;
  if (oracle.mode() == OracleMode::kService) {
    auto [host, port] = parse_bind_address(args.bind);
    service = std::make_unique<Service>(oracle.queue(), monitor, args.ui_dir);
    int bound = service->start(host, port);
    err << "review service listening on http://" << host << ":" << bound << "/ui\n";
  }

  EngineHooks hooks;
  hooks.log = &err;
  hooks.on_iteration = [&](const BootstrapState &state) {
    monitor.set_current(state.relation);
    monitor.update(state);
  };
  PipelineResult result = run_pipeline(std::move(docs), gazetteers, model ? &*model : nullptr,
                                       seeds, config, &oracle, only.empty() ? nullptr : &only,
                                       hooks);
  monitor.set_finished();
  if (service) service->stop();

  for (const std::string &w : result.warnings) err << "warning: " << w << "\n";
  fs::create_directories(args.out);
  for (const auto &[name, state] : result.states) {
    export_state(state, fs::path(args.out) / (name + ".state.json"));
  }
  std::vector<RelationInstance> extracted = extracted_relations(result.states);
  save_relation_list(extracted, fs::path(args.out) / "extracted.json");
  out << "kept " << result.kept.size() << " of " << result.kept.size() + result.dropped.size()
      << " documents; extracted " << extracted.size() << " relations -> " << args.out << "\n";
  return kExitOk;
}

int cmd_eval(const EvalArgs &args, std::ostream &out) {
  std::vector<RelationInstance> extracted = load_relation_list(args.extracted);
  std::vector<GoldRelation> gold = load_gold(args.gold);
  std::optional<std::set<std::string>> labeled;
  if (!args.labeled_docs.empty()) {
    labeled.emplace();
    for (const std::string &id : args.labeled_docs) {
      if (id == "all") {
        for (const GoldRelation &g : gold) labeled->insert(g.doc_id);
      } else {
        labeled->insert(id);
      }
    }
  }
  EvalReport report = evaluate(extracted, gold, labeled ? &*labeled : nullptr);
  if (args.as_json) {
    out << report_to_json(report).dump(2) << "\n";
  } else {
    out << render_report(report);
  }
  return kExitOk;
}

int cmd_generate(const GenerateArgs &args, std::ostream &out) {
  GazetteerSet gazetteers = load_gazetteers(args.gazetteers);
  SynthCorpus corpus = generate_corpus(args.spec, gazetteers);
  fs::path root(args.out);
  fs::create_directories(root / "corpus");
  fs::create_directories(root / "seeds");
  for (const Document &doc : corpus.documents) {
    save_document(doc, root / "corpus" / (doc.id + ".json"));
  }
  save_gold(corpus.gold, root / "gold.json");
  for (const auto &[name, seeds] : template_seeds(args.spec.template_set)) {
    json patterns = json::array();
    for (const Pattern &p : seeds.patterns) patterns.push_back(pattern_to_json(p));
    json file = {{"relation", name}, {"patterns", patterns}, {"relations", json::array()}};
    write_file((root / "seeds" / (name + ".json")).string(), file.dump(2) + "\n");
  }
  out << "generated " << corpus.documents.size() << " documents with " << corpus.gold.size()
      << " planted relations -> " << args.out << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::istream &in, std::ostream &out,
            std::ostream &err) {
  CLI::App app{"Security relation extraction by bootstrapping", "secrel"};
  app.require_subcommand(1);

  TagArgs tag;
  CLI::App *tag_cmd = app.add_subcommand("tag", "Label entity mentions in a corpus");
  tag_cmd->add_option("--corpus", tag.corpus, "Corpus directory or file")->required();
  tag_cmd->add_option("--gazetteers", tag.gazetteers, "Gazetteer directory")->required();
  tag_cmd->add_option("--out", tag.out, "Output mentions JSON")->required();

  TrainArgs trainer;
  CLI::App *train_cmd =
      app.add_subcommand("train-relevance", "Fit the relevance gate on labeled documents");
  train_cmd->add_option("--corpus", trainer.corpus, "Annotated corpus with relevance labels")
      ->required();
  train_cmd->add_option("--gazetteers", trainer.gazetteers, "Gazetteer directory")->required();
  train_cmd->add_option("--out", trainer.out, "Output model JSON")->required();
  train_cmd->add_option("--l2", trainer.options.l2, "L2 penalty");
  train_cmd->add_option("--epochs", trainer.options.epochs, "Gradient descent steps");
  train_cmd->add_option("--learning-rate", trainer.options.learning_rate, "Step size");
  train_cmd->add_option("--threshold", trainer.options.threshold, "Decision threshold");

  BootstrapArgs boot;
  CLI::App *boot_cmd = app.add_subcommand("bootstrap", "Run the bootstrap pipeline");
  boot_cmd->add_option("--corpus", boot.corpus, "Corpus directory or file")->required();
  boot_cmd->add_option("--gazetteers", boot.gazetteers, "Gazetteer directory")->required();
  boot_cmd->add_option("--seeds", boot.seeds, "Seed directory")->required();
  boot_cmd->add_option("--config", boot.config, "Bootstrap configuration JSON");
  boot_cmd->add_option("--oracle", boot.oracle, "interactive | scripted:PATH | serve | auto");
  boot_cmd->add_option("--out", boot.out, "State output directory")->required();
  boot_cmd->add_option("--bind", boot.bind, "Service address (serve mode)");
  boot_cmd->add_option("--ui-dir", boot.ui_dir, "Static review UI assets");
  boot_cmd->add_option("--answer-timeout", boot.answer_timeout,
                       "Seconds to wait for service answers before treating them as unknown");
  boot_cmd->add_option("--relevance-model", boot.relevance_model, "Relevance model JSON");
  boot_cmd->add_option("--only", boot.only, "Relation types to run")->delimiter(',');

  EvalArgs ev;
  CLI::App *eval_cmd = app.add_subcommand("eval", "Score extracted relations against gold");
  eval_cmd->add_option("--extracted", ev.extracted, "Extracted relations JSON")->required();
  eval_cmd->add_option("--gold", ev.gold, "Gold relations JSON")->required();
  eval_cmd->add_option("--labeled-docs", ev.labeled_docs,
                       "Fully labeled document ids for recall, or 'all'")
      ->delimiter(',');
  eval_cmd->add_flag("--json", ev.as_json, "Print the report as JSON");

  GenerateArgs gen;
  CLI::App *gen_cmd = app.add_subcommand("generate", "Write a synthetic corpus with gold");
  gen_cmd->add_option("--gazetteers", gen.gazetteers, "Gazetteer directory")->required();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--docs", gen.spec.num_docs, "Number of documents")->capture_default_str();
  gen_cmd->add_option("--relations-per-doc", gen.spec.relations_per_doc, "Sentence slots per document")->capture_default_str();
  gen_cmd->add_option("--noise", gen.spec.noise_sentence_rate, "Noise sentence rate");
  gen_cmd->add_option("--seed", gen.spec.rng_seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--template-set", gen.spec.template_set, "Template set");

  std::vector<std::string> argv_store = {"secrel"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char *> argv;
  for (const std::string &a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*tag_cmd) return cmd_tag(tag, out);
    if (*train_cmd) return cmd_train(trainer, out, err);
    if (*boot_cmd) return cmd_bootstrap(boot, in, out, err);
    if (*eval_cmd) return cmd_eval(ev, out);
    if (*gen_cmd) return cmd_generate(gen, out);
  } catch (const BindError &e) {
    err << "error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace secrel
