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

#ifndef EVCOREF_TRAINER_H_
#define EVCOREF_TRAINER_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "evcoref/corpus.h"
#include "evcoref/decoder.h"
#include "evcoref/embeddings.h"
#include "evcoref/metrics.h"
#include "evcoref/model.h"
#include "evcoref/nn/adamax.h"

namespace evcoref {

struct TrainConfig {
  double proposal_weight = 1.0;  // lambda
  double learning_rate = 1e-3;
  double anneal_factor = 0.5;
  int anneal_patience = 5;
  int early_stopping_patience = 10;
  int max_epochs = 150;
  int batch_size = 1;
  int max_document_length = 1024;
  std::uint64_t seed = 1;
  bool refine = true;
  // Adds the antecedent loss on first-pass scores as well.
  bool first_pass_loss = false;
  DecodeMode dev_decode = DecodeMode::kTypeGuided;
  DecodeOptions decode_options;
  int workers = 1;

  void Validate() const;
};

// GOLD(i) for one retained span.
struct GoldSet {
  bool dummy = false;
  std::vector<int> types;        // event-type ordinals
  std::vector<int> antecedents;  // retained span ordinals

  bool empty() const { return !dummy && types.empty() && antecedents.empty(); }
};

using GoldAssignment = std::vector<GoldSet>;

// Per retained span: first retained mention of a chain -> {its type}; later
// mentions -> their coreferent retained antecedents among the
// `max_antecedents` nearest, or {its type} when none survive; non-mentions
// -> {eps}.
GoldAssignment GoldAntecedentSets(const Document& doc, std::span<const int> retained,
                                  int max_antecedents);

// Marks GOLD(i) in the score layout of `graph`. Throws std::logic_error if
// a set is empty or leaves Y(i).
nn::BoolMatrix GoldMask(const GoldAssignment& gold, const ForwardGraph& graph);

// sum_i log sum_{y in GOLD(i)} P(y | D), P the softmax over Y(i).
nn::Var AntecedentLoss(nn::Var scores, const nn::BoolMatrix& valid,
                       const nn::BoolMatrix& gold);
// sum_i y_i log sigma(s_m(i)) + (1 - y_i) log(1 - sigma(s_m(i))).
nn::Var ProposalLoss(nn::Var mention_scores, std::span<const double> labels);
nn::Var TotalObjective(nn::Var antecedent, nn::Var proposal, double proposal_weight);

// 1 at gold mention tokens, 0 elsewhere.
std::vector<double> MentionLabels(const Document& doc);

struct DocumentObjective {
  ForwardGraph graph;
  nn::Var antecedent;
  nn::Var proposal;
  nn::Var total;  // to maximize
};

DocumentObjective BuildObjective(nn::Tape& tape, const CorefModel& model,
                                 const Document& doc, const LayeredEmbeddings& emb,
                                 const TrainConfig& config,
                                 std::mt19937_64* dropout_rng);

struct Example {
  Document doc;
  LayeredEmbeddings emb;
};

// Learning-rate annealing and early stopping on a dev score (higher is
// better).
class PlateauSchedule {
 public:
  struct Outcome {
    bool improved = false;
    bool annealed = false;
    bool stop = false;
  };

  PlateauSchedule(double learning_rate, double factor, int anneal_patience,
                  int stop_patience);

  Outcome Update(double dev_score);

  double learning_rate() const { return lr_; }
  double best() const { return best_; }
  int epochs_since_improvement() const { return bad_epochs_; }

 private:
  double lr_;
  double factor_;
  int anneal_patience_;
  int stop_patience_;
  double best_;
  bool has_best_ = false;
  int bad_epochs_ = 0;
  int since_anneal_ = 0;
};

struct EpochRecord {
  int epoch = 0;
  double objective = 0.0;  // summed over training documents
  double learning_rate = 0.0;
  MetricReport dev;
};

std::string FormatEpochRecord(const EpochRecord& record);

struct TrainResult {
  std::vector<EpochRecord> log;
  int best_epoch = 0;
  double best_dev_avg_f = 0.0;
  nn::Adamax optimizer;  // state as of the best epoch
};

// Trains `model` in place and leaves it at the best-dev parameters. Each
// epoch record is written to `log` (if non-null) as it completes.
TrainResult Train(CorefModel& model, std::span<const Example> train,
                  std::span<const Example> dev, const TrainConfig& config,
                  std::ostream* log = nullptr);

struct PredictOptions {
  bool refine = true;
  DecodeMode decode = DecodeMode::kTypeGuided;
  DecodeOptions decode_options;
  int workers = 1;
};

ChainSet PredictDocument(const CorefModel& model, const LayeredEmbeddings& emb,
                         const PredictOptions& options = {});
std::vector<ChainSet> Predict(const CorefModel& model, std::span<const Example> docs,
                              const PredictOptions& options = {});

MetricReport EvaluateModel(const CorefModel& model, std::span<const Example> docs,
                           const PredictOptions& options = {});

}  // namespace evcoref

#endif  // EVCOREF_TRAINER_H_
