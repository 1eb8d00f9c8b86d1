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

#ifndef EVCOREF_MODEL_H_
#define EVCOREF_MODEL_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "evcoref/embeddings.h"
#include "evcoref/nn/ffnn.h"
#include "evcoref/nn/parameter.h"
#include "evcoref/nn/tape.h"
#include "evcoref/score_table.h"

namespace evcoref {

enum class DistanceMode { kOrdinal, kToken };

struct ModelConfig {
  int layers = 0;     // L of the embeddings
  int width = 0;      // d of the embeddings
  int num_types = 0;  // |T|
  int attention_window = 10;
  double word_dropout = 0.5;
  int ffnn_hidden_layers = 2;
  int ffnn_hidden_units = 150;
  double ffnn_dropout = 0.2;
  int distance_width = 20;
  int max_antecedents = 50;
  double top_span_ratio = 0.1;
  DistanceMode distance_mode = DistanceMode::kOrdinal;

  // Throws ConfigError on out-of-range values.
  void Validate() const;
  bool operator==(const ModelConfig&) const = default;
};

// Buckets {0, 1, 2, 3, 4, 5-7, 8-15, 16-31, 32-63, 64+}.
inline constexpr int kDistanceBuckets = 10;
int DistanceBucket(int distance);

// l = max(1, floor(ratio * n)).
int TopSpanCount(int n, double ratio = 0.1);

// Indices of the TopSpanCount(n) highest scores, returned in ascending
// order. Ties prefer the earlier position.
std::vector<int> SelectTopSpans(std::span<const double> mention_scores,
                                double ratio = 0.1);

// Softmax over [eps, t_1..t_T] given type scores; eps is fixed at 0.
// Returns T + 1 probabilities with eps first.
std::vector<double> TypeDistribution(std::span<const double> type_scores);

// Graph-level pieces of the scorer. All row-major in spans.

// g_t = [e_event, e_type(t)] W_e for every type; returns T x d.
nn::Var TypeEmbeddings(nn::Var event_embedding, nn::Var type_embedding,
                       nn::Var projection);

// Q = softmax over [eps, types] (l x (T+1)); returns
//   g~_i = sum_k Q(t_k) g_{t_k} + Q(eps) g_i
//   f_i  = sigmoid([g_i, g~_i] W_f)
//   g'_i = f_i * g_i + (1 - f_i) * g~_i
struct Refinement {
  nn::Var expected;  // g~
  nn::Var gate;      // f
  nn::Var refined;   // g'
};
Refinement RefineRepresentations(nn::Var spans, nn::Var type_distribution,
                                 nn::Var type_vectors, nn::Var gate_weights);

// Scores of one pass laid out as an l x (1 + T + K) matrix: column 0 is
// eps (always 0), columns 1..T the type scores, column T + 1 + k the k-th
// nearest preceding retained span. `valid` marks the defined entries.
struct PassScores {
  nn::Var scores;
  nn::Var pair_similarity;  // P x 1, aligned with pair_row/pair_col
  nn::Var type_similarity;  // l*T x 1, row-major (span, type)
  std::vector<int> pair_row;
  std::vector<int> pair_col;
};

struct ForwardGraph {
  int num_tokens = 0;
  int num_types = 0;
  int candidate_columns = 0;  // K actually used (<= max_antecedents)
  std::vector<int> retained;  // token indices, ascending
  nn::Var all_mention_scores;       // n x 1
  nn::Var retained_mention_scores;  // l x 1
  nn::Var type_mention_scores;      // T x 1
  nn::Var type_vectors;             // T x d
  nn::Var spans;                    // G, l x d
  nn::Var refined_spans;            // G', l x d (== spans without refinement)
  nn::Var type_distribution;        // Q, l x (T+1), eps first
  nn::Var gate;                     // f, l x d (invalid without refinement)
  PassScores first;
  PassScores refined;  // == first without refinement
  bool has_refinement = false;
  nn::BoolMatrix valid;             // l x (1 + T + K)

  int columns() const { return 1 + num_types + candidate_columns; }
  int type_column(int type) const { return 1 + type; }
  int antecedent_column(int span, int antecedent) const {
    return 1 + num_types + (span - 1 - antecedent);
  }
  ScoreTable Table(bool refined_pass) const;
};

struct ForwardOptions {
  // Non-null enables dropout (training mode).
  std::mt19937_64* dropout_rng = nullptr;
  bool refine = true;
};

class CorefModel {
 public:
  explicit CorefModel(ModelConfig config);
  CorefModel(const CorefModel&) = delete;
  CorefModel& operator=(const CorefModel&) = delete;

  // Glorot-uniform weights and zero biases for every tensor. Scalar mix
  // starts uniform with gamma = 1.
  void Initialize(std::uint64_t seed);

  ForwardGraph Forward(nn::Tape& tape, const LayeredEmbeddings& emb,
                       const ForwardOptions& options = {}) const;

  // First-pass and refined tables in evaluation mode.
  std::pair<ScoreTable, ScoreTable> Score(const LayeredEmbeddings& emb,
                                          bool refine = true) const;

  const ModelConfig& config() const { return config_; }
  nn::ParameterStore& parameters() { return params_; }
  const nn::ParameterStore& parameters() const { return params_; }

  const nn::Ffnn& mention_ffnn() const { return mention_ffnn_; }
  const nn::Ffnn& pair_ffnn() const { return pair_ffnn_; }

 private:
  PassScores ScorePass(nn::Tape& tape, nn::Var spans, nn::Var mention_scores,
                       nn::Var type_vectors, nn::Var type_mention_scores,
                       std::span<const int> retained, int candidate_columns,
                       std::mt19937_64* rng) const;

  ModelConfig config_;
  nn::ParameterStore params_;
  nn::Parameter* layer_logits_;
  nn::Parameter* gamma_;
  nn::Parameter* event_embedding_;
  nn::Parameter* type_embedding_;
  nn::Parameter* type_projection_;
  nn::Parameter* distance_embedding_;
  nn::Parameter* gate_weights_;
  nn::Ffnn mention_ffnn_;
  nn::Ffnn pair_ffnn_;
};

}  // namespace evcoref

#endif  // EVCOREF_MODEL_H_
