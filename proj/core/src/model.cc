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

#include "evcoref/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "evcoref/encoder.h"
#include "evcoref/error.h"
#include "evcoref/nn/dropout.h"

namespace evcoref {
namespace {

nn::FfnnConfig MakeFfnnConfig(const ModelConfig& c, int input_width) {
  nn::FfnnConfig f;
  f.input_width = input_width;
  f.hidden_layers = c.ffnn_hidden_layers;
  f.hidden_units = c.ffnn_hidden_units;
  f.output_width = 1;
  f.dropout = c.ffnn_dropout;
  return f;
}

const ModelConfig& Checked(const ModelConfig& c) {
  c.Validate();
  return c;
}

}  // namespace

void ModelConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw ConfigError("model config: " + what);
  };
  if (layers < 1) fail("layers must be >= 1");
  if (width < 2) fail("width must be >= 2");
  if (num_types < 1) fail("need at least one event type");
  if (attention_window < 1) fail("attention_window must be >= 1");
  if (!(word_dropout >= 0.0 && word_dropout < 1.0)) fail("word_dropout not in [0,1)");
  if (!(ffnn_dropout >= 0.0 && ffnn_dropout < 1.0)) fail("ffnn_dropout not in [0,1)");
  if (ffnn_hidden_layers < 0) fail("ffnn_hidden_layers must be >= 0");
  if (ffnn_hidden_units < 1) fail("ffnn_hidden_units must be >= 1");
  if (distance_width < 1) fail("distance_width must be >= 1");
  if (max_antecedents < 1) fail("max_antecedents must be >= 1");
  if (!(top_span_ratio > 0.0 && top_span_ratio <= 1.0)) {
    fail("top_span_ratio not in (0,1]");
  }
}

int DistanceBucket(int distance) {
  if (distance < 0) throw std::invalid_argument("negative distance");
  if (distance <= 4) return distance;
  if (distance <= 7) return 5;
  if (distance <= 15) return 6;
  if (distance <= 31) return 7;
  if (distance <= 63) return 8;
  return 9;
}

int TopSpanCount(int n, double ratio) {
  const int l = static_cast<int>(std::floor(ratio * n + 1e-9));
  return std::clamp(l, 1, std::max(n, 1));
}

std::vector<int> SelectTopSpans(std::span<const double> mention_scores,
                                double ratio) {
  const int n = static_cast<int>(mention_scores.size());
  if (n == 0) return {};
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return mention_scores[a] > mention_scores[b];
  });
  order.resize(static_cast<std::size_t>(TopSpanCount(n, ratio)));
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<double> TypeDistribution(std::span<const double> type_scores) {
  std::vector<double> out(type_scores.size() + 1);
  out[0] = kDummyScore;
  std::copy(type_scores.begin(), type_scores.end(), out.begin() + 1);
  const double max = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - max);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

nn::Var TypeEmbeddings(nn::Var event_embedding, nn::Var type_embedding,
                       nn::Var projection) {
  const std::vector<int> zeros(static_cast<std::size_t>(type_embedding.rows()), 0);
  const nn::Var shared = nn::GatherRows(event_embedding, zeros);
  const nn::Var parts[] = {shared, type_embedding};
  return nn::MatMul(nn::ConcatCols(parts), projection);
}

Refinement RefineRepresentations(nn::Var spans, nn::Var type_distribution,
                                 nn::Var type_vectors, nn::Var gate_weights) {
  const int num_types = type_vectors.rows();
  if (type_distribution.cols() != num_types + 1 ||
      type_distribution.rows() != spans.rows()) {
    throw std::invalid_argument("refinement: distribution shape mismatch");
  }
  Refinement r;
  const nn::Var q_dummy = nn::SliceCols(type_distribution, 0, 1);
  const nn::Var q_types = nn::SliceCols(type_distribution, 1, num_types);
  r.expected = nn::Add(nn::MatMul(q_types, type_vectors),
                       nn::MulColumnBroadcast(spans, q_dummy));
  const nn::Var gate_in[] = {spans, r.expected};
  r.gate = nn::Sigmoid(nn::MatMul(nn::ConcatCols(gate_in), gate_weights));
  r.refined = nn::Add(r.expected, nn::Mul(r.gate, nn::Sub(spans, r.expected)));
  return r;
}

CorefModel::CorefModel(ModelConfig config)
    : config_(Checked(config)),
      layer_logits_(&params_.Add("mix.layer_logits", 1, config_.layers)),
      gamma_(&params_.Add("mix.gamma", 1, 1)),
      event_embedding_(&params_.Add("type.event", 1, config_.width / 2)),
      type_embedding_(&params_.Add("type.embedding", config_.num_types,
                                   config_.width - config_.width / 2)),
      type_projection_(&params_.Add("type.projection", config_.width, config_.width)),
      distance_embedding_(
          &params_.Add("distance.embedding", kDistanceBuckets, config_.distance_width)),
      gate_weights_(&params_.Add("refine.gate", 2 * config_.width, config_.width)),
      mention_ffnn_(params_, "mention", MakeFfnnConfig(config_, config_.width)),
      pair_ffnn_(params_, "pair",
                 MakeFfnnConfig(config_, 3 * config_.width + config_.distance_width)) {}

void CorefModel::Initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  layer_logits_->value().setZero();
  gamma_->value().setOnes();
  nn::GlorotUniform(event_embedding_->value(), rng);
  nn::GlorotUniform(type_embedding_->value(), rng);
  nn::GlorotUniform(type_projection_->value(), rng);
  nn::GlorotUniform(distance_embedding_->value(), rng);
  nn::GlorotUniform(gate_weights_->value(), rng);
  mention_ffnn_.Initialize(rng, /*zero_output=*/false);
  pair_ffnn_.Initialize(rng, /*zero_output=*/false);
  params_.ZeroGrad();
}

PassScores CorefModel::ScorePass(nn::Tape& tape, nn::Var spans,
                                 nn::Var mention_scores, nn::Var type_vectors,
                                 nn::Var type_mention_scores,
                                 std::span<const int> retained,
                                 int candidate_columns,
                                 std::mt19937_64* rng) const {
  const int l = spans.rows();
  const int num_types = type_vectors.rows();
  const nn::Var distance = tape.Input(*distance_embedding_);
  PassScores out;

  // Span-type pairs, distance bucket 0.
  std::vector<int> ti, tk, tb, trow, tcol;
  for (int i = 0; i < l; ++i) {
    for (int k = 0; k < num_types; ++k) {
      ti.push_back(i);
      tk.push_back(k);
      tb.push_back(0);
      trow.push_back(i);
      tcol.push_back(1 + k);
    }
  }
  {
    const nn::Var gi = nn::GatherRows(spans, ti);
    const nn::Var gt = nn::GatherRows(type_vectors, tk);
    const nn::Var feats[] = {gi, gt, nn::Mul(gi, gt), nn::GatherRows(distance, tb)};
    out.type_similarity = pair_ffnn_.Forward(tape, nn::ConcatCols(feats), rng);
  }
  const nn::Var type_scores =
      nn::Add(nn::Add(nn::GatherRows(mention_scores, ti),
                      nn::GatherRows(type_mention_scores, tk)),
              out.type_similarity);
  const int columns = 1 + num_types + candidate_columns;
  nn::Var scores = nn::ScatterColumn(type_scores, trow, tcol, l, columns);

  std::vector<int> pi, pj, pb;
  for (int i = 0; i < l; ++i) {
    const int first = std::max(0, i - config_.max_antecedents);
    for (int j = i - 1; j >= first; --j) {
      pi.push_back(i);
      pj.push_back(j);
      const int dist = config_.distance_mode == DistanceMode::kOrdinal
                           ? i - j
                           : retained[i] - retained[j];
      pb.push_back(DistanceBucket(dist));
      out.pair_row.push_back(i);
      out.pair_col.push_back(1 + num_types + (i - 1 - j));
    }
  }
  if (!pi.empty()) {
    const nn::Var gi = nn::GatherRows(spans, pi);
    const nn::Var gj = nn::GatherRows(spans, pj);
    const nn::Var feats[] = {gi, gj, nn::Mul(gi, gj), nn::GatherRows(distance, pb)};
    out.pair_similarity = pair_ffnn_.Forward(tape, nn::ConcatCols(feats), rng);
    const nn::Var pair_scores =
        nn::Add(nn::Add(nn::GatherRows(mention_scores, pi),
                        nn::GatherRows(mention_scores, pj)),
                out.pair_similarity);
    scores = nn::Add(scores, nn::ScatterColumn(pair_scores, out.pair_row,
                                               out.pair_col, l, columns));
  }
  out.scores = scores;
  return out;
}

ForwardGraph CorefModel::Forward(nn::Tape& tape, const LayeredEmbeddings& emb,
                                 const ForwardOptions& options) const {
  if (emb.L != config_.layers || emb.d != config_.width) {
    throw CheckpointError("embeddings for '" + emb.doc_id + "' have L=" +
                          std::to_string(emb.L) + ", d=" + std::to_string(emb.d) +
                          " but the model expects L=" +
                          std::to_string(config_.layers) +
                          ", d=" + std::to_string(config_.width));
  }
  if (emb.n < 1) throw DataError("embeddings for '" + emb.doc_id + "' are empty");
  std::mt19937_64* rng = options.dropout_rng;
  ForwardGraph g;
  g.num_tokens = emb.n;
  g.num_types = config_.num_types;

  std::vector<nn::Var> layers;
  layers.reserve(static_cast<std::size_t>(emb.L));
  for (int j = 0; j < emb.L; ++j) layers.push_back(tape.Constant(emb.Layer(j)));
  nn::Var h = ScalarMix(layers, tape.Input(*layer_logits_), tape.Input(*gamma_));
  if (rng != nullptr && config_.word_dropout > 0.0) {
    h = nn::MulConstant(h, nn::DropoutMask(h.rows(), h.cols(),
                                           config_.word_dropout, *rng));
  }
  const nn::Var contextual = MaskAttention(h, config_.attention_window);

  g.all_mention_scores = mention_ffnn_.Forward(tape, contextual, rng);
  const nn::Matrix& sm = g.all_mention_scores.value();
  g.retained = SelectTopSpans(std::span<const double>(sm.data(), sm.size()),
                              config_.top_span_ratio);
  const int l = static_cast<int>(g.retained.size());
  g.candidate_columns = std::min(config_.max_antecedents, std::max(0, l - 1));
  g.spans = nn::GatherRows(contextual, g.retained);
  g.retained_mention_scores = nn::GatherRows(g.all_mention_scores, g.retained);

  g.type_vectors = TypeEmbeddings(tape.Input(*event_embedding_),
                                  tape.Input(*type_embedding_),
                                  tape.Input(*type_projection_));
  g.type_mention_scores = mention_ffnn_.Forward(tape, g.type_vectors, rng);

  g.first = ScorePass(tape, g.spans, g.retained_mention_scores, g.type_vectors,
                      g.type_mention_scores, g.retained, g.candidate_columns, rng);
  g.type_distribution =
      nn::RowSoftmax(nn::SliceCols(g.first.scores, 0, 1 + g.num_types));

  g.valid = nn::BoolMatrix::Constant(l, g.columns(), false);
  for (int i = 0; i < l; ++i) {
    for (int c = 0; c <= g.num_types; ++c) g.valid(i, c) = true;
  }
  for (std::size_t p = 0; p < g.first.pair_row.size(); ++p) {
    g.valid(g.first.pair_row[p], g.first.pair_col[p]) = true;
  }

  if (options.refine) {
    const Refinement r = RefineRepresentations(
        g.spans, g.type_distribution, g.type_vectors, tape.Input(*gate_weights_));
    g.gate = r.gate;
    g.refined_spans = r.refined;
    g.refined = ScorePass(tape, r.refined, g.retained_mention_scores,
                          g.type_vectors, g.type_mention_scores, g.retained,
                          g.candidate_columns, rng);
    g.has_refinement = true;
  } else {
    g.refined_spans = g.spans;
    g.refined = g.first;
  }
  return g;
}

ScoreTable ForwardGraph::Table(bool refined_pass) const {
  const PassScores& pass = refined_pass ? refined : first;
  const nn::Matrix& s = pass.scores.value();
  const nn::Matrix& type_sim = pass.type_similarity.value();
  const nn::Matrix& sm = retained_mention_scores.value();
  ScoreTable table;
  const nn::Matrix& tm = type_mention_scores.value();
  table.type_mention_scores.assign(tm.data(), tm.data() + tm.size());
  const int l = static_cast<int>(retained.size());
  table.spans.resize(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i) {
    SpanScores& span = table.spans[static_cast<std::size_t>(i)];
    span.token = retained[static_cast<std::size_t>(i)];
    span.mention_score = sm(i, 0);
    for (int k = 0; k < num_types; ++k) {
      span.type_scores.push_back(s(i, type_column(k)));
      span.type_similarity.push_back(type_sim(i * num_types + k, 0));
    }
  }
  if (!pass.pair_row.empty()) {
    const nn::Matrix& pair_sim = pass.pair_similarity.value();
    for (std::size_t p = 0; p < pass.pair_row.size(); ++p) {
      const int i = pass.pair_row[p];
      const int j = i - 1 - (pass.pair_col[p] - 1 - num_types);
      table.spans[static_cast<std::size_t>(i)].antecedents.push_back(
          {j, s(i, pass.pair_col[p]), pair_sim(static_cast<Eigen::Index>(p), 0)});
    }
    for (SpanScores& span : table.spans) {
      std::sort(span.antecedents.begin(), span.antecedents.end(),
                [](const AntecedentScore& a, const AntecedentScore& b) {
                  return a.span < b.span;
                });
    }
  }
  return table;
}

std::pair<ScoreTable, ScoreTable> CorefModel::Score(const LayeredEmbeddings& emb,
                                                    bool refine) const {
  nn::Tape tape;
  ForwardOptions options;
  options.refine = refine;
  const ForwardGraph g = Forward(tape, emb, options);
  return {g.Table(false), g.Table(true)};
}

}  // namespace evcoref
