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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "evcoref/decoder.h"
#include "evcoref/embeddings.h"
#include "evcoref/encoder.h"
#include "evcoref/error.h"
#include "evcoref/model.h"
#include "evcoref/nn/tape.h"
#include "evcoref/synthetic_corpus.h"
#include "test_util.h"

namespace evcoref {
namespace {

using testing::Jitter;

ModelConfig SmallConfig(int layers = 3, int width = 8, int types = 18) {
  ModelConfig mc;
  mc.layers = layers;
  mc.width = width;
  mc.num_types = types;
  mc.ffnn_hidden_units = 10;
  return mc;
}

Document SynthDoc(int tokens, std::uint64_t seed = 1) {
  SyntheticCorpusOptions opts;
  opts.num_documents = 1;
  opts.min_tokens = tokens;
  opts.max_tokens = tokens;
  opts.min_chains = 1;
  opts.max_chains = 2;
  opts.seed = seed;
  return MakeSyntheticCorpus(opts).front();
}

TEST(DistanceBucket, Boundaries) {
  const std::vector<std::pair<int, int>> cases = {
      {0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}, {7, 5}, {8, 6}, {15, 6},
      {16, 7}, {31, 7}, {32, 8}, {63, 8}, {64, 9}, {1000, 9}};
  for (auto [distance, bucket] : cases) EXPECT_EQ(DistanceBucket(distance), bucket) << distance;
  EXPECT_THROW(DistanceBucket(-1), std::invalid_argument);
}

TEST(TopSpans, Count) {
  EXPECT_EQ(TopSpanCount(200), 20);
  EXPECT_EQ(TopSpanCount(5), 1);
  EXPECT_EQ(TopSpanCount(1), 1);
  EXPECT_EQ(TopSpanCount(19), 1);
  EXPECT_EQ(TopSpanCount(20), 2);
  EXPECT_EQ(TopSpanCount(30), 3);
  EXPECT_EQ(TopSpanCount(10, 0.5), 5);
}

TEST(TopSpans, HighestScoresInDocumentOrder) {
  std::vector<double> s(20, 0.0);
  s[17] = 3.0;
  s[4] = 2.0;
  s[9] = 1.0;
  EXPECT_EQ(SelectTopSpans(s), (std::vector<int>{4, 17}));
}

TEST(TopSpans, TiesAtCutoffPreferEarlierToken) {
  std::vector<double> s(20, -1.0);
  s[15] = 0.5;
  s[3] = 0.5;
  s[11] = 0.5;
  s[18] = 2.0;
  EXPECT_EQ(SelectTopSpans(s), (std::vector<int>{3, 18}));
  const std::vector<double> flat(30, 0.0);
  EXPECT_EQ(SelectTopSpans(flat), (std::vector<int>{0, 1, 2}));
}

TEST(TypeDistribution, UniformOverTypesAndDummy) {
  const std::vector<double> zero(18, 0.0);
  const auto q = TypeDistribution(zero);
  ASSERT_EQ(q.size(), 19u);
  for (double v : q) EXPECT_NEAR(v, 1.0 / 19.0, 1e-15);
  EXPECT_NEAR(q[0], 0.05263, 1e-5);
}

TEST(TypeDistribution, HandEvaluatedSoftmax) {
  const std::vector<double> s = {1.0, 0.0};
  const auto q = TypeDistribution(s);
  const double e = std::exp(1.0);
  EXPECT_NEAR(q[0], 1.0 / (e + 2.0), 1e-15);
  EXPECT_NEAR(q[1], e / (e + 2.0), 1e-15);
  EXPECT_NEAR(q[2], 1.0 / (e + 2.0), 1e-15);
  EXPECT_NEAR(q[1], 0.5761, 1e-4);
  EXPECT_NEAR(q[0], 0.2119, 1e-4);
}

TEST(TypeDistribution, SaturatesAndSumsToOne) {
  std::vector<double> s(18, 0.0);
  s[4] = 50.0;
  EXPECT_NEAR(TypeDistribution(s)[5], 1.0, 1e-15);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> r(1 + trial % 20);
    for (double& v : r) v = normal(rng);
    double total = 0.0;
    for (double v : TypeDistribution(r)) total += v;
    EXPECT_NEAR(total, 1.0, 1e-6);
  }
}

TEST(TypeEmbeddings, HandSetProjection) {
  nn::Tape tape;
  nn::Matrix event(1, 2), types(2, 2), w(4, 4);
  event << 1.0, -1.0;
  types << 0.5, 2.0, 0.0, 1.0;
  w << 1, 0, 2, 0,
       0, 1, 0, 1,
       1, 1, 0, 0,
       0, 0, 1, -1;
  const nn::Matrix g =
      TypeEmbeddings(tape.Constant(event), tape.Constant(types), tape.Constant(w)).value();
  ASSERT_EQ(g.rows(), 2);
  ASSERT_EQ(g.cols(), 4);
  for (int k = 0; k < 2; ++k) {
    const double x[4] = {event(0, 0), event(0, 1), types(k, 0), types(k, 1)};
    for (int c = 0; c < 4; ++c) {
      double want = 0.0;
      for (int r = 0; r < 4; ++r) want += x[r] * w(r, c);
      EXPECT_DOUBLE_EQ(g(k, c), want) << k << "," << c;
    }
  }
  // Types with equal rows get equal vectors; zero parameters give zero.
  types.row(1) = types.row(0);
  const nn::Matrix same =
      TypeEmbeddings(tape.Constant(event), tape.Constant(types), tape.Constant(w)).value();
  EXPECT_EQ(same.row(0), same.row(1));
  const nn::Matrix zero = TypeEmbeddings(tape.Constant(nn::Matrix::Zero(1, 2)),
                                         tape.Constant(nn::Matrix::Zero(2, 2)),
                                         tape.Constant(nn::Matrix::Zero(4, 4)))
                              .value();
  EXPECT_TRUE(zero.isZero(0.0));
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

TEST(Refinement, HandEvaluatedGateAndExpectation) {
  nn::Tape tape;
  nn::Matrix g(1, 2), q(1, 3), gt(2, 2), wf(4, 2);
  g << 1.0, -2.0;
  q << 0.2, 0.5, 0.3;  // eps, t1, t2
  gt << 4.0, 0.0, -1.0, 2.0;
  wf << 0.1, -0.2,
        0.3, 0.0,
        -0.5, 0.4,
        0.2, 0.1;
  const Refinement r = RefineRepresentations(tape.Constant(g), tape.Constant(q),
                                             tape.Constant(gt), tape.Constant(wf));
  const double expected[2] = {0.5 * 4.0 + 0.3 * -1.0 + 0.2 * 1.0,
                              0.5 * 0.0 + 0.3 * 2.0 + 0.2 * -2.0};
  const double in[4] = {g(0, 0), g(0, 1), expected[0], expected[1]};
  for (int c = 0; c < 2; ++c) {
    EXPECT_NEAR(r.expected.value()(0, c), expected[c], 1e-15);
    double z = 0.0;
    for (int k = 0; k < 4; ++k) z += in[k] * wf(k, c);
    const double f = Sigmoid(z);
    EXPECT_NEAR(r.gate.value()(0, c), f, 1e-15);
    EXPECT_NEAR(r.refined.value()(0, c), f * g(0, c) + (1 - f) * expected[c], 1e-14);
  }
}

TEST(Refinement, DummyCertaintyKeepsRepresentation) {
  nn::Tape tape;
  nn::Matrix g(2, 3), q(2, 3), gt(2, 3), wf(6, 3);
  g << 1, 2, 3, -1, 0.5, 4;
  q << 1, 0, 0, 1, 0, 0;
  gt << 9, 9, 9, -9, 9, -9;
  wf.setConstant(-0.7);
  const Refinement r = RefineRepresentations(tape.Constant(g), tape.Constant(q),
                                             tape.Constant(gt), tape.Constant(wf));
  EXPECT_TRUE(r.refined.value().isApprox(g, 1e-15));
}

TEST(Refinement, SaturatedGateKeepsRepresentation) {
  nn::Tape tape;
  nn::Matrix g(1, 2), q(1, 2), gt(1, 2), wf(4, 2);
  g << 1.0, 1.0;
  q << 0.1, 0.9;
  gt << -3.0, 5.0;
  wf.setConstant(1e3);
  const Refinement r = RefineRepresentations(tape.Constant(g), tape.Constant(q),
                                             tape.Constant(gt), tape.Constant(wf));
  EXPECT_NEAR(r.refined.value()(0, 0), 1.0, 1e-9);
  EXPECT_NEAR(r.refined.value()(0, 1), 1.0, 1e-9);
}

TEST(Model, ZeroParametersScoreZeroEverywhere) {
  CorefModel model(SmallConfig());
  model.Initialize(3);
  for (nn::Parameter* p : model.parameters().all()) p->value().setZero();
  const Document doc = SynthDoc(40);
  const auto emb = SynthEmbeddings(doc, 2, 3, 8, 1.0);
  const auto [first, refined] = model.Score(emb);
  for (const ScoreTable* t : {&first, &refined}) {
    ASSERT_EQ(t->spans.size(), 4u);
    for (const SpanScores& s : t->spans) {
      EXPECT_EQ(s.mention_score, 0.0);
      for (double v : s.type_scores) EXPECT_EQ(v, 0.0);
      for (const AntecedentScore& a : s.antecedents) EXPECT_EQ(a.score, 0.0);
    }
    EXPECT_TRUE(Decode(*t).empty());
  }
}

TEST(Model, DecompositionHoldsInBothPasses) {
  CorefModel model(SmallConfig());
  model.Initialize(4);
  Jitter(model.parameters(), 5, 0.2);
  const auto emb = SynthEmbeddings(SynthDoc(60), 2, 3, 8, 1.0);
  const auto [first, refined] = model.Score(emb);
  for (const ScoreTable* t : {&first, &refined}) {
    for (std::size_t i = 0; i < t->spans.size(); ++i) {
      const SpanScores& s = t->spans[i];
      ASSERT_EQ(s.antecedents.size(), i);
      for (const AntecedentScore& a : s.antecedents) {
        EXPECT_LT(a.span, static_cast<int>(i));
        EXPECT_NEAR(a.score - a.similarity,
                    s.mention_score + t->spans[a.span].mention_score, 1e-12);
      }
      for (int k = 0; k < t->num_types(); ++k) {
        EXPECT_NEAR(s.type_scores[k] - s.type_similarity[k],
                    s.mention_score + t->type_mention_scores[k], 1e-12);
      }
    }
  }
}

TEST(Model, PassesShareRetainedSpansAndMentionScores) {
  CorefModel model(SmallConfig());
  model.Initialize(6);
  Jitter(model.parameters(), 7, 0.2);
  const auto emb = SynthEmbeddings(SynthDoc(12), 2, 3, 8, 1.0);
  const auto [first, refined] = model.Score(emb);
  EXPECT_EQ(first.retained_tokens(), refined.retained_tokens());
  ASSERT_EQ(first.spans.size(), refined.spans.size());
  for (std::size_t i = 0; i < first.spans.size(); ++i) {
    EXPECT_EQ(first.spans[i].mention_score, refined.spans[i].mention_score);
  }
  EXPECT_EQ(first.type_mention_scores, refined.type_mention_scores);
}

TEST(Model, NoRefineReturnsFirstPassTwice) {
  CorefModel model(SmallConfig());
  model.Initialize(6);
  Jitter(model.parameters(), 8, 0.2);
  ModelConfig mc = model.config();
  mc.top_span_ratio = 0.3;
  CorefModel wide(mc);
  wide.Initialize(6);
  Jitter(wide.parameters(), 8, 0.2);
  const auto emb = SynthEmbeddings(SynthDoc(30), 2, 3, 8, 1.0);
  const auto [first, refined] = wide.Score(emb, /*refine=*/false);
  ASSERT_EQ(first.spans.size(), refined.spans.size());
  for (std::size_t i = 0; i < first.spans.size(); ++i) {
    EXPECT_EQ(first.spans[i].type_scores, refined.spans[i].type_scores);
    ASSERT_EQ(first.spans[i].antecedents.size(), refined.spans[i].antecedents.size());
    for (std::size_t a = 0; a < first.spans[i].antecedents.size(); ++a) {
      EXPECT_EQ(first.spans[i].antecedents[a].score, refined.spans[i].antecedents[a].score);
    }
  }
  // With refinement the second pass differs.
  const auto [f2, r2] = wide.Score(emb, /*refine=*/true);
  bool differs = false;
  for (std::size_t i = 0; i < f2.spans.size(); ++i) {
    differs = differs || f2.spans[i].type_scores != r2.spans[i].type_scores;
  }
  EXPECT_TRUE(differs);
}

TEST(Model, SpanRepresentationIsContextualTokenVector) {
  CorefModel model(SmallConfig());
  model.Initialize(9);
  Jitter(model.parameters(), 10, 0.2);
  const auto emb = SynthEmbeddings(SynthDoc(50), 3, 3, 8, 1.0);
  nn::Tape tape;
  const ForwardGraph g = model.Forward(tape, emb);
  MixParameters mix;
  mix.layer_logits = model.parameters().Get("mix.layer_logits").value().row(0).transpose();
  mix.gamma = model.parameters().Get("mix.gamma").value()(0, 0);
  const nn::Matrix c = MaskAttention(ScalarMix(emb, mix), model.config().attention_window);
  for (std::size_t i = 0; i < g.retained.size(); ++i) {
    EXPECT_TRUE(g.spans.value().row(i).isApprox(c.row(g.retained[i]), 1e-12));
  }
}

TEST(Model, GateStrictlyInsideUnitIntervalAndConvex) {
  CorefModel model(SmallConfig());
  model.Initialize(11);
  Jitter(model.parameters(), 12, 0.5);
  const auto emb = SynthEmbeddings(SynthDoc(80), 4, 3, 8, 1.0);
  nn::Tape tape;
  const ForwardGraph g = model.Forward(tape, emb);
  ASSERT_TRUE(g.has_refinement);
  const nn::Matrix& f = g.gate.value();
  EXPECT_GT(f.minCoeff(), 0.0);
  EXPECT_LT(f.maxCoeff(), 1.0);
  const Refinement r = RefineRepresentations(g.spans, g.type_distribution, g.type_vectors,
                                             tape.Constant(model.parameters().Get("refine.gate").value()));
  const nn::Matrix& gs = g.spans.value();
  const nn::Matrix& ge = r.expected.value();
  const nn::Matrix& gp = g.refined_spans.value();
  for (Eigen::Index i = 0; i < gp.rows(); ++i) {
    for (Eigen::Index k = 0; k < gp.cols(); ++k) {
      EXPECT_GE(gp(i, k), std::min(gs(i, k), ge(i, k)) - 1e-12);
      EXPECT_LE(gp(i, k), std::max(gs(i, k), ge(i, k)) + 1e-12);
    }
  }
  // Q rows are distributions.
  for (Eigen::Index i = 0; i < g.type_distribution.rows(); ++i) {
    EXPECT_NEAR(g.type_distribution.value().row(i).sum(), 1.0, 1e-6);
  }
}

TEST(Model, AntecedentCapAndValidLayout) {
  ModelConfig mc = SmallConfig();
  mc.max_antecedents = 3;
  mc.top_span_ratio = 0.5;
  CorefModel model(mc);
  model.Initialize(13);
  const auto emb = SynthEmbeddings(SynthDoc(20), 1, 3, 8, 0.0);
  nn::Tape tape;
  const ForwardGraph g = model.Forward(tape, emb);
  ASSERT_EQ(g.retained.size(), 10u);
  EXPECT_EQ(g.candidate_columns, 3);
  EXPECT_EQ(g.columns(), 1 + 18 + 3);
  for (int i = 0; i < 10; ++i) {
    for (int c = 0; c <= 18; ++c) EXPECT_TRUE(g.valid(i, c));
    for (int k = 0; k < 3; ++k) EXPECT_EQ(g.valid(i, 19 + k), k < i) << i << "," << k;
  }
  EXPECT_EQ(g.antecedent_column(5, 4), 19);
  EXPECT_EQ(g.antecedent_column(5, 2), 21);
  const ScoreTable t = g.Table(true);
  EXPECT_EQ(t.spans[9].antecedents.size(), 3u);
  EXPECT_EQ(t.spans[9].antecedents.front().span, 6);
}

TEST(Model, IdenticalRepresentationsScoreIdentically) {
  CorefModel model(SmallConfig(2, 4, 3));
  model.Initialize(1);
  Jitter(model.parameters(), 2, 0.3);
  LayeredEmbeddings emb;
  emb.doc_id = "same";
  emb.n = 30;
  emb.L = 2;
  emb.d = 4;
  emb.values.assign(30 * 2 * 4, 0.25f);
  const auto [first, refined] = model.Score(emb);
  for (const SpanScores& s : refined.spans) {
    EXPECT_DOUBLE_EQ(s.mention_score, refined.spans.front().mention_score);
  }
}

TEST(Model, RejectsMismatchedEmbeddingsAndConfig) {
  CorefModel model(SmallConfig());
  model.Initialize(1);
  const auto emb = SynthEmbeddings(SynthDoc(20), 1, 4, 8, 1.0);
  EXPECT_THROW(model.Score(emb), CheckpointError);
  ModelConfig bad = SmallConfig();
  bad.top_span_ratio = 0.0;
  EXPECT_THROW(CorefModel{bad}, ConfigError);
  bad = SmallConfig();
  bad.word_dropout = 1.0;
  EXPECT_THROW(CorefModel{bad}, ConfigError);
}

TEST(Model, InitializationIsSeeded) {
  CorefModel a(SmallConfig());
  CorefModel b(SmallConfig());
  CorefModel c(SmallConfig());
  a.Initialize(21);
  b.Initialize(21);
  c.Initialize(22);
  bool differs = false;
  for (const nn::Parameter* p : a.parameters().all()) {
    EXPECT_EQ(p->value(), b.parameters().Get(p->name()).value()) << p->name();
    differs = differs || p->value() != c.parameters().Get(p->name()).value();
  }
  EXPECT_TRUE(differs);
}

}  // namespace
}  // namespace evcoref
