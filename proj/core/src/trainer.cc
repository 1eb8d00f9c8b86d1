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

#include "evcoref/trainer.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "evcoref/error.h"
#include "evcoref/parallel.h"
#include "evcoref/random.h"

namespace evcoref {

void TrainConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw ConfigError("train config: " + what);
  };
  if (batch_size != 1) fail("only mini_batch_size = 1 is supported");
  if (!(learning_rate > 0.0)) fail("initial_learning_rate must be > 0");
  if (!(anneal_factor > 0.0 && anneal_factor <= 1.0)) {
    fail("lr_anneal_factor must be in (0, 1]");
  }
  if (anneal_patience < 1) fail("lr_anneal_patience must be >= 1");
  if (early_stopping_patience < 1) fail("early_stopping_patience must be >= 1");
  if (max_epochs < 1) fail("max_epochs must be >= 1");
  if (max_document_length < 1) fail("max_document_length must be >= 1");
  if (proposal_weight < 0.0) fail("proposal_loss_weight must be >= 0");
  if (workers < 1) fail("workers must be >= 1");
}

GoldAssignment GoldAntecedentSets(const Document& doc, std::span<const int> retained,
                                  int max_antecedents) {
  std::map<int, const Mention*> at_token;
  for (const Mention& m : doc.mentions) at_token[m.token_index] = &m;
  GoldAssignment gold(retained.size());
  for (std::size_t i = 0; i < retained.size(); ++i) {
    auto it = at_token.find(retained[i]);
    if (it == at_token.end()) {
      gold[i].dummy = true;
      continue;
    }
    const Mention& mention = *it->second;
    const std::size_t first =
        i > static_cast<std::size_t>(max_antecedents) ? i - max_antecedents : 0;
    for (std::size_t j = first; j < i; ++j) {
      auto jt = at_token.find(retained[j]);
      if (jt != at_token.end() && jt->second->chain_id == mention.chain_id) {
        gold[i].antecedents.push_back(static_cast<int>(j));
      }
    }
    if (gold[i].antecedents.empty()) gold[i].types.push_back(mention.event_type);
  }
  return gold;
}

nn::BoolMatrix GoldMask(const GoldAssignment& gold, const ForwardGraph& graph) {
  const int l = static_cast<int>(graph.retained.size());
  if (static_cast<int>(gold.size()) != l) {
    throw std::logic_error("gold assignment does not cover the retained spans");
  }
  nn::BoolMatrix mask = nn::BoolMatrix::Constant(l, graph.columns(), false);
  for (int i = 0; i < l; ++i) {
    const GoldSet& set = gold[static_cast<std::size_t>(i)];
    if (set.empty()) throw std::logic_error("empty gold antecedent set");
    if (set.dummy) mask(i, 0) = true;
    for (int t : set.types) mask(i, graph.type_column(t)) = true;
    for (int j : set.antecedents) {
      const int c = graph.antecedent_column(i, j);
      if (j >= i || c >= graph.columns() || !graph.valid(i, c)) {
        throw std::logic_error("gold antecedent outside the candidate set");
      }
      mask(i, c) = true;
    }
  }
  return mask;
}

nn::Var AntecedentLoss(nn::Var scores, const nn::BoolMatrix& valid,
                       const nn::BoolMatrix& gold) {
  if ((gold && !valid).any()) throw std::logic_error("GOLD(i) not inside Y(i)");
  for (Eigen::Index r = 0; r < gold.rows(); ++r) {
    if (!gold.row(r).any()) throw std::logic_error("empty gold antecedent set");
  }
  return nn::Sum(nn::Sub(nn::MaskedRowLogSumExp(scores, gold),
                         nn::MaskedRowLogSumExp(scores, valid)));
}

nn::Var ProposalLoss(nn::Var mention_scores, std::span<const double> labels) {
  return nn::BinaryLogLikelihood(mention_scores, labels);
}

nn::Var TotalObjective(nn::Var antecedent, nn::Var proposal, double proposal_weight) {
  return nn::Add(antecedent, nn::Scale(proposal, proposal_weight));
}

std::vector<double> MentionLabels(const Document& doc) {
  std::vector<double> labels(static_cast<std::size_t>(doc.size()), 0.0);
  for (const Mention& m : doc.mentions) labels[static_cast<std::size_t>(m.token_index)] = 1.0;
  return labels;
}

DocumentObjective BuildObjective(nn::Tape& tape, const CorefModel& model,
                                 const Document& doc, const LayeredEmbeddings& emb,
                                 const TrainConfig& config,
                                 std::mt19937_64* dropout_rng) {
  if (emb.n != doc.size()) {
    throw DataError("embeddings for '" + doc.doc_id + "' cover " +
                    std::to_string(emb.n) + " tokens, document has " +
                    std::to_string(doc.size()));
  }
  ForwardOptions options;
  options.dropout_rng = dropout_rng;
  options.refine = config.refine;
  DocumentObjective out{model.Forward(tape, emb, options), {}, {}, {}};
  const GoldAssignment gold =
      GoldAntecedentSets(doc, out.graph.retained, model.config().max_antecedents);
  const nn::BoolMatrix gold_mask = GoldMask(gold, out.graph);
  out.antecedent = AntecedentLoss(out.graph.refined.scores, out.graph.valid, gold_mask);
  if (config.first_pass_loss && out.graph.has_refinement) {
    out.antecedent = nn::Add(
        out.antecedent, AntecedentLoss(out.graph.first.scores, out.graph.valid, gold_mask));
  }
  const std::vector<double> labels = MentionLabels(doc);
  out.proposal = ProposalLoss(out.graph.all_mention_scores, labels);
  out.total = TotalObjective(out.antecedent, out.proposal, config.proposal_weight);
  return out;
}

PlateauSchedule::PlateauSchedule(double learning_rate, double factor,
                                 int anneal_patience, int stop_patience)
    : lr_(learning_rate),
      factor_(factor),
      anneal_patience_(anneal_patience),
      stop_patience_(stop_patience),
      best_(0.0) {}

PlateauSchedule::Outcome PlateauSchedule::Update(double dev_score) {
  Outcome out;
  if (!has_best_ || dev_score > best_) {
    has_best_ = true;
    best_ = dev_score;
    bad_epochs_ = 0;
    since_anneal_ = 0;
    out.improved = true;
    return out;
  }
  ++bad_epochs_;
  ++since_anneal_;
  if (bad_epochs_ >= stop_patience_) {
    out.stop = true;
    return out;
  }
  if (since_anneal_ >= anneal_patience_) {
    lr_ *= factor_;
    since_anneal_ = 0;
    out.annealed = true;
  }
  return out;
}

std::string FormatEpochRecord(const EpochRecord& r) {
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "epoch=%d objective=%.6f lr=%.9g muc=%.6f b3=%.6f ceafe=%.6f "
                "blanc=%.6f avg_f=%.6f type_f1=%.6f",
                r.epoch, r.objective, r.learning_rate, r.dev.muc.f1,
                r.dev.b_cubed.f1, r.dev.ceaf_e.f1, r.dev.blanc.f1, r.dev.avg_f,
                r.dev.type.f1);
  return buf;
}

namespace {

std::vector<nn::Matrix> Snapshot(const nn::ParameterStore& params) {
  std::vector<nn::Matrix> out;
  for (const nn::Parameter* p : params.all()) out.push_back(p->value());
  return out;
}

void Restore(nn::ParameterStore& params, const std::vector<nn::Matrix>& values) {
  auto all = params.all();
  for (std::size_t i = 0; i < all.size(); ++i) all[i]->value() = values[i];
}

}  // namespace

TrainResult Train(CorefModel& model, std::span<const Example> train,
                  std::span<const Example> dev, const TrainConfig& config,
                  std::ostream* log) {
  config.Validate();
  if (train.empty()) throw ConfigError("training corpus is empty");
  if (dev.empty()) throw ConfigError("dev corpus is empty");

  std::vector<Example> examples;
  examples.reserve(train.size());
  for (const Example& ex : train) {
    if (ex.emb.n != ex.doc.size()) {
      throw DataError("embeddings for '" + ex.doc.doc_id + "' do not match the document");
    }
    examples.push_back({TruncateDocument(ex.doc, config.max_document_length),
                        ex.emb.Truncated(config.max_document_length)});
  }

  nn::AdamaxOptions opt;
  opt.learning_rate = config.learning_rate;
  nn::Adamax optimizer(opt);
  PlateauSchedule schedule(config.learning_rate, config.anneal_factor,
                           config.anneal_patience, config.early_stopping_patience);
  PredictOptions predict;
  predict.refine = config.refine;
  predict.decode = config.dev_decode;
  predict.decode_options = config.decode_options;
  predict.workers = config.workers;

  TrainResult result;
  std::vector<nn::Matrix> best = Snapshot(model.parameters());
  result.optimizer = optimizer;
  std::mt19937_64 shuffle_rng(CombineKeys(config.seed, HashString("#shuffle")));
  const std::uint64_t dropout_key = CombineKeys(config.seed, HashString("#dropout"));
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t step = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    Shuffle(order, shuffle_rng);
    EpochRecord record;
    record.epoch = epoch;
    record.learning_rate = optimizer.learning_rate();
    for (std::size_t idx : order) {
      const Example& ex = examples[idx];
      std::mt19937_64 dropout_rng(CombineKeys(dropout_key, ++step));
      nn::Tape tape;
      DocumentObjective obj =
          BuildObjective(tape, model, ex.doc, ex.emb, config, &dropout_rng);
      const double value = obj.total.scalar();
      if (!std::isfinite(value)) {
        throw NumericError("non-finite objective on document '" + ex.doc.doc_id +
                           "' in epoch " + std::to_string(epoch));
      }
      model.parameters().ZeroGrad();
      tape.Backward(nn::Scale(obj.total, -1.0));
      try {
        model.parameters().CheckGradientsFinite();
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " (document '" + ex.doc.doc_id +
                           "', epoch " + std::to_string(epoch) + ")");
      }
      optimizer.Step(model.parameters());
      model.parameters().CheckValuesFinite();
      record.objective += value;
    }
    record.dev = EvaluateModel(model, dev, predict);
    const PlateauSchedule::Outcome outcome = schedule.Update(record.dev.avg_f);
    if (outcome.improved) {
      best = Snapshot(model.parameters());
      result.optimizer = optimizer;
      result.best_epoch = epoch;
      result.best_dev_avg_f = record.dev.avg_f;
    }
    if (outcome.annealed) optimizer.set_learning_rate(schedule.learning_rate());
    result.log.push_back(record);
    if (log != nullptr) *log << FormatEpochRecord(record) << '\n' << std::flush;
    if (outcome.stop) break;
  }
  Restore(model.parameters(), best);
  return result;
}

ChainSet PredictDocument(const CorefModel& model, const LayeredEmbeddings& emb,
                         const PredictOptions& options) {
  const auto tables = model.Score(emb, options.refine);
  return DecodeWithMode(tables.second, options.decode, options.decode_options);
}

std::vector<ChainSet> Predict(const CorefModel& model, std::span<const Example> docs,
                              const PredictOptions& options) {
  std::vector<ChainSet> out(docs.size());
  ParallelFor(docs.size(), options.workers, [&](std::size_t i) {
    if (docs[i].emb.n != docs[i].doc.size()) {
      throw DataError("embeddings for '" + docs[i].doc.doc_id +
                      "' do not match the document");
    }
    out[i] = PredictDocument(model, docs[i].emb, options);
  });
  return out;
}

MetricReport EvaluateModel(const CorefModel& model, std::span<const Example> docs,
                           const PredictOptions& options) {
  const std::vector<ChainSet> predicted = Predict(model, docs, options);
  MetricCounts counts;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    counts.AddDocument(GoldChains(docs[i].doc), predicted[i]);
  }
  return counts.Report();
}

}  // namespace evcoref
