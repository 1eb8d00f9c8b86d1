// Copyright 2026 The evcoref Authors.
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

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "evcoref/checkpoint.h"
#include "evcoref/corpus.h"
#include "evcoref/embeddings.h"
#include "evcoref/error.h"
#include "evcoref/metrics.h"
#include "evcoref/model.h"
#include "evcoref/run_config.h"
#include "evcoref/synthetic_corpus.h"
#include "evcoref/trainer.h"

namespace evcoref::cli {
namespace {

namespace fs = std::filesystem;

// Flags shared by train and predict that override config-file values.
struct Overrides {
  std::string config;
  std::string corpus;
  std::string dev;
  std::string embeddings;
  std::string checkpoint;
  std::string out;
  std::string types;
  std::string decode;
  std::uint64_t seed = 0;
  int workers = 1;
  int max_epochs = 0;
  bool no_refine = false;
  bool keep_filtered = false;
  std::map<std::string, CLI::Option*> given;

  bool Has(const std::string& name) const {
    auto it = given.find(name);
    return it != given.end() && it->second->count() > 0;
  }
};

void AddCommon(CLI::App* cmd, Overrides& o) {
  o.given["config"] = cmd->add_option("--config", o.config, "JSON run config");
  o.given["seed"] = cmd->add_option("--seed", o.seed, "Random seed");
  o.given["workers"] =
      cmd->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
}

RunConfig Resolve(const Overrides& o) {
  RunConfig c;
  if (!o.config.empty()) c = LoadRunConfig(o.config);
  if (o.Has("corpus")) c.corpus_path = o.corpus;
  if (o.Has("dev")) c.dev_path = o.dev;
  if (o.Has("embeddings")) c.embeddings_dir = o.embeddings;
  if (o.Has("checkpoint")) c.checkpoint_path = o.checkpoint;
  if (o.Has("out")) c.output_path = o.out;
  if (o.Has("types")) c.types_path = o.types;
  if (o.Has("decode")) c.decode = ParseDecodeMode(o.decode);
  if (o.Has("seed")) c.seed = o.seed;
  if (o.Has("workers")) c.workers = o.workers;
  if (o.Has("max-epochs")) c.train.max_epochs = o.max_epochs;
  if (o.no_refine) c.refine = false;
  if (o.keep_filtered) c.decode_options.keep_filtered_candidates = true;
  c.Sync();
  return c;
}

void Require(const std::string& value, const std::string& flag, const std::string& key) {
  if (value.empty()) {
    throw ConfigError(flag + " is required (or \"" + key + "\" in --config)");
  }
}

TypeInventory LoadTypes(const std::string& path) {
  return path.empty() ? TypeInventory::Kbp() : TypeInventory::Load(path);
}

std::vector<Document> LoadCorpus(const std::string& path, const TypeInventory& types) {
  if (!fs::exists(path)) throw ConfigError("corpus file not found: " + path);
  return ParseCorpus(path, types);
}

std::vector<Example> AttachEmbeddings(const std::vector<Document>& docs,
                                      const std::string& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("embeddings directory not found: " + dir);
  std::vector<Example> examples;
  examples.reserve(docs.size());
  for (const Document& doc : docs) {
    Example ex{doc, LoadEmbeddings(EmbeddingPath(dir, doc.doc_id), doc)};
    if (!examples.empty() &&
        (ex.emb.L != examples.front().emb.L || ex.emb.d != examples.front().emb.d)) {
      throw DataError("embeddings for " + doc.doc_id + " have L=" + std::to_string(ex.emb.L) +
                      ", d=" + std::to_string(ex.emb.d) + "; expected L=" +
                      std::to_string(examples.front().emb.L) + ", d=" +
                      std::to_string(examples.front().emb.d));
    }
    examples.push_back(std::move(ex));
  }
  return examples;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

fs::path PrepareOutDir(const std::string& dir) {
  Require(dir, "--out", "output");
  fs::create_directories(dir);
  return fs::path(dir);
}

int CmdTrain(const Overrides& o, std::ostream& out) {
  RunConfig c = Resolve(o);
  Require(c.corpus_path, "--corpus", "corpus");
  Require(c.embeddings_dir, "--embeddings", "embeddings");
  const fs::path dir = PrepareOutDir(c.output_path);
  if (c.checkpoint_path.empty()) c.checkpoint_path = (dir / "model.e3ck").string();
  c.train.Validate();

  const TypeInventory types = LoadTypes(c.types_path);
  const auto train_docs = LoadCorpus(c.corpus_path, types);
  if (train_docs.empty()) throw DataError("training corpus is empty");
  const auto train = AttachEmbeddings(train_docs, c.embeddings_dir);
  std::vector<Example> dev;
  if (!c.dev_path.empty()) dev = AttachEmbeddings(LoadCorpus(c.dev_path, types), c.embeddings_dir);
  if (!dev.empty() && (dev.front().emb.L != train.front().emb.L ||
                       dev.front().emb.d != train.front().emb.d)) {
    throw DataError("dev embeddings differ in shape from training embeddings");
  }

  c.model.layers = train.front().emb.L;
  c.model.width = train.front().emb.d;
  c.model.num_types = types.size();
  c.model.Validate();
  const std::string resolved = RunConfigToJson(c);
  WriteText(dir / "config.json", resolved);

  CorefModel model(c.model);
  model.Initialize(c.seed);
  std::ofstream log(dir / "train_log.txt", std::ios::binary | std::ios::trunc);
  if (!log) throw ConfigError("cannot write training log in " + dir.string());
  const TrainResult result =
      Train(model, train, dev.empty() ? std::span<const Example>(train) : std::span<const Example>(dev),
            c.train, &log);
  SaveCheckpoint(c.checkpoint_path, model, types, resolved, &result.optimizer);
  out << "epochs=" << result.log.size() << " best_epoch=" << result.best_epoch
      << " best_dev_avg_f=" << result.best_dev_avg_f << "\n"
      << "checkpoint=" << c.checkpoint_path << "\n";
  return kOk;
}

int CmdPredict(const Overrides& o, std::ostream& out) {
  RunConfig c = Resolve(o);
  Require(c.checkpoint_path, "--checkpoint", "checkpoint");
  Require(c.corpus_path, "--corpus", "corpus");
  Require(c.embeddings_dir, "--embeddings", "embeddings");
  const fs::path dir = PrepareOutDir(c.output_path);

  Checkpoint ck = LoadCheckpoint(c.checkpoint_path);
  const auto examples = AttachEmbeddings(LoadCorpus(c.corpus_path, ck.types), c.embeddings_dir);
  if (!examples.empty() && (examples.front().emb.L != ck.model_config.layers ||
                            examples.front().emb.d != ck.model_config.width)) {
    throw CheckpointError("checkpoint expects L=" + std::to_string(ck.model_config.layers) +
                          ", d=" + std::to_string(ck.model_config.width) +
                          " but embeddings have L=" + std::to_string(examples.front().emb.L) +
                          ", d=" + std::to_string(examples.front().emb.d));
  }
  c.model = ck.model_config;
  WriteText(dir / "config.json", RunConfigToJson(c));

  PredictOptions options;
  options.refine = c.refine;
  options.decode = c.decode;
  options.decode_options = c.decode_options;
  options.workers = c.workers;
  const auto predictions = Predict(*ck.model, examples, options);
  std::vector<Document> docs;
  docs.reserve(examples.size());
  for (const auto& ex : examples) docs.push_back(ex.doc);
  const fs::path path = dir / "predictions.jsonl";
  WritePredictions(docs, predictions, ck.types, path.string());
  out << "documents=" << docs.size() << "\npredictions=" << path.string() << "\n";
  return kOk;
}

struct ScoreArgs {
  std::string gold;
  std::string system;
  std::string types;
  bool machine = false;
};

std::set<int> MentionTokens(const Document& doc) {
  std::set<int> tokens;
  for (const auto& m : doc.mentions) tokens.insert(m.token_index);
  return tokens;
}

int CmdScore(const ScoreArgs& a, std::ostream& out, std::ostream& err) {
  Require(a.gold, "--gold", "gold");
  Require(a.system, "--system", "system");
  const TypeInventory types = LoadTypes(a.types);
  const auto gold = LoadCorpus(a.gold, types);
  const auto sys = LoadCorpus(a.system, types);
  std::map<std::string, const Document*> by_id;
  for (const auto& d : sys) by_id.emplace(d.doc_id, &d);

  std::vector<ChainSet> gold_chains;
  std::vector<ChainSet> sys_chains;
  std::vector<std::string> missing;
  int differing = 0;
  for (const auto& g : gold) {
    gold_chains.push_back(GoldChains(g));
    auto it = by_id.find(g.doc_id);
    if (it == by_id.end()) {
      missing.push_back(g.doc_id);
      sys_chains.emplace_back();
      continue;
    }
    if (it->second->tokens.size() != g.tokens.size()) {
      throw DataError(a.system + ": document " + g.doc_id + " has " +
                      std::to_string(it->second->tokens.size()) + " tokens, gold has " +
                      std::to_string(g.tokens.size()));
    }
    if (MentionTokens(*it->second) != MentionTokens(g)) ++differing;
    sys_chains.push_back(GoldChains(*it->second));
    by_id.erase(it);
  }
  if (!missing.empty()) {
    err << "warning: " << missing.size()
        << " gold document(s) missing from system output; scored as empty:";
    for (std::size_t k = 0; k < missing.size() && k < 5; ++k) err << ' ' << missing[k];
    err << (missing.size() > 5 ? " ...\n" : "\n");
  }
  if (!by_id.empty()) {
    err << "warning: " << by_id.size() << " system document(s) not in gold; ignored\n";
  }
  if (differing > 0) {
    err << "warning: " << differing << " document(s) have differing mention sets\n";
  }
  const MetricReport report = Evaluate(gold_chains, sys_chains);
  out << (a.machine ? FormatReportMachine(report) : FormatReport(report));
  return kOk;
}

struct SynthArgs {
  std::string corpus;
  std::string out;
  std::string types;
  std::uint64_t seed = 1;
  int layers = 4;
  int width = 64;
  double type_signal = 0.0;
};

int CmdSynth(const SynthArgs& a, std::ostream& out) {
  Require(a.corpus, "--corpus", "corpus");
  if (a.layers < 1 || a.width < 1) throw ConfigError("--layers and --width must be >= 1");
  if (a.type_signal < 0.0) throw ConfigError("--type-signal must be >= 0");
  const fs::path dir = PrepareOutDir(a.out);
  const auto docs = LoadCorpus(a.corpus, LoadTypes(a.types));
  for (const auto& doc : docs) {
    WriteEmbeddings(EmbeddingPath(dir.string(), doc.doc_id),
                    SynthEmbeddings(doc, a.seed, a.layers, a.width, a.type_signal));
  }
  out << "documents=" << docs.size() << "\nembeddings=" << dir.string() << "\n";
  return kOk;
}

struct GenArgs {
  SyntheticCorpusOptions options;
  std::string out;
  std::string types;
};

int CmdGenCorpus(GenArgs a, std::ostream& out) {
  Require(a.out, "--out", "output");
  const TypeInventory types = LoadTypes(a.types);
  a.options.num_types = types.size();
  const auto docs = MakeSyntheticCorpus(a.options);
  std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write " + a.out);
  WriteCorpus(f, docs, types);
  out << "documents=" << docs.size() << "\ncorpus=" << a.out << "\n";
  return kOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Event coreference with type-guided decoding", "evcoref"};
  app.require_subcommand(1);

  Overrides train_o;
  auto* train = app.add_subcommand("train", "Train a model");
  AddCommon(train, train_o);
  train_o.given["corpus"] = train->add_option("--corpus", train_o.corpus, "Training corpus (JSONL)");
  train_o.given["dev"] = train->add_option("--dev", train_o.dev, "Dev corpus for model selection");
  train_o.given["embeddings"] = train->add_option("--embeddings", train_o.embeddings, "Directory of .e3ce files");
  train_o.given["out"] = train->add_option("--out", train_o.out, "Output directory");
  train_o.given["checkpoint"] = train->add_option("--checkpoint", train_o.checkpoint, "Checkpoint path (default <out>/model.e3ck)");
  train_o.given["types"] = train->add_option("--types", train_o.types, "Type inventory file");
  train_o.given["decode"] = train->add_option("--decode", train_o.decode, "Dev decoding mode");
  train_o.given["max-epochs"] = train->add_option("--max-epochs", train_o.max_epochs, "Epoch limit");
  train->add_flag("--no-refine", train_o.no_refine, "Disable type-refined representations");

  Overrides pred_o;
  auto* predict = app.add_subcommand("predict", "Predict chains");
  AddCommon(predict, pred_o);
  pred_o.given["checkpoint"] = predict->add_option("--checkpoint", pred_o.checkpoint, "Checkpoint file");
  pred_o.given["corpus"] = predict->add_option("--corpus", pred_o.corpus, "Input corpus (JSONL)");
  pred_o.given["embeddings"] = predict->add_option("--embeddings", pred_o.embeddings, "Directory of .e3ce files");
  pred_o.given["out"] = predict->add_option("--out", pred_o.out, "Output directory");
  pred_o.given["decode"] = predict->add_option("--decode", pred_o.decode, "type-guided | naive | type-rule");
  predict->add_flag("--no-refine", pred_o.no_refine, "Score with first-pass representations");
  predict->add_flag("--keep-filtered-candidates", pred_o.keep_filtered,
                    "Let filtered spans serve as antecedents");

  ScoreArgs score_a;
  auto* score = app.add_subcommand("score", "Score system chains against gold");
  score->add_option("--gold", score_a.gold, "Gold corpus (JSONL)");
  score->add_option("--system", score_a.system, "System output (JSONL)");
  score->add_option("--types", score_a.types, "Type inventory file");
  score->add_flag("--machine", score_a.machine, "Key-value output");
  std::string unused_config;
  std::uint64_t unused_seed = 0;
  int unused_workers = 1;
  score->add_option("--config", unused_config, "Accepted for uniformity");
  score->add_option("--seed", unused_seed, "Accepted for uniformity");
  score->add_option("--workers", unused_workers, "Accepted for uniformity");

  SynthArgs synth_a;
  auto* synth = app.add_subcommand("synth", "Write synthetic embeddings");
  synth->add_option("--corpus", synth_a.corpus, "Corpus (JSONL)");
  synth->add_option("--out", synth_a.out, "Output directory");
  synth->add_option("--types", synth_a.types, "Type inventory file");
  synth->add_option("--seed", synth_a.seed, "Random seed");
  synth->add_option("--layers", synth_a.layers, "L");
  synth->add_option("--width", synth_a.width, "d");
  synth->add_option("--type-signal", synth_a.type_signal, "Strength of the planted type signal");
  synth->add_option("--config", unused_config, "Accepted for uniformity");
  synth->add_option("--workers", unused_workers, "Accepted for uniformity");

  GenArgs gen_a;
  auto* gen = app.add_subcommand("gen-corpus", "Write a random synthetic corpus");
  gen->add_option("--out", gen_a.out, "Output JSONL file");
  gen->add_option("--types", gen_a.types, "Type inventory file");
  gen->add_option("--docs", gen_a.options.num_documents, "Number of documents");
  gen->add_option("--seed", gen_a.options.seed, "Random seed");
  gen->add_option("--min-tokens", gen_a.options.min_tokens, "Shortest document");
  gen->add_option("--max-tokens", gen_a.options.max_tokens, "Longest document");
  gen->add_option("--min-chains", gen_a.options.min_chains, "Fewest chains per document");
  gen->add_option("--max-chains", gen_a.options.max_chains, "Most chains per document");
  gen->add_option("--shared-type-rate", gen_a.options.shared_type_rate,
                  "Chance a chain reuses an earlier chain's type");
  gen->add_option("--id-prefix", gen_a.options.id_prefix, "Document id prefix");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (train->parsed()) return CmdTrain(train_o, out);
    if (predict->parsed()) return CmdPredict(pred_o, out);
    if (score->parsed()) return CmdScore(score_a, out, err);
    if (synth->parsed()) return CmdSynth(synth_a, out);
    if (gen->parsed()) return CmdGenCorpus(gen_a, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const CheckpointError& e) {
    err << "checkpoint error: " << e.what() << "\n";
    return kCheckpointError;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace evcoref::cli
