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

#include "evcoref/encoder.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "evcoref/nn/tape.h"

namespace evcoref {
namespace {

LayeredEmbeddings TwoLayerToy() {
  LayeredEmbeddings e;
  e.doc_id = "toy";
  e.n = 1;
  e.L = 2;
  e.d = 2;
  e.values = {1.0f, 0.0f, 0.0f, 1.0f};
  return e;
}

TEST(ScalarMix, UniformWeights) {
  const nn::Matrix h = ScalarMix(TwoLayerToy(), MixParameters::Uniform(2));
  EXPECT_DOUBLE_EQ(h(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(h(0, 1), 0.5);
  MixParameters g2 = MixParameters::Uniform(2);
  g2.gamma = 2.0;
  const nn::Matrix h2 = ScalarMix(TwoLayerToy(), g2);
  EXPECT_DOUBLE_EQ(h2(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(h2(0, 1), 1.0);
}

TEST(ScalarMix, MatchesDirectFormula) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  LayeredEmbeddings e;
  e.doc_id = "r";
  e.n = 4;
  e.L = 3;
  e.d = 5;
  for (int k = 0; k < e.n * e.L * e.d; ++k) e.values.push_back(static_cast<float>(normal(rng)));
  MixParameters mix;
  mix.layer_logits = nn::Vector(3);
  mix.layer_logits << 1.0, 0.0, -1.0;
  mix.gamma = 0.7;
  const nn::Matrix h = ScalarMix(e, mix);
  const double z = std::exp(1.0) + 1.0 + std::exp(-1.0);
  const double w[3] = {std::exp(1.0) / z, 1.0 / z, std::exp(-1.0) / z};
  for (int i = 0; i < e.n; ++i) {
    for (int k = 0; k < e.d; ++k) {
      double expect = 0.0;
      for (int j = 0; j < 3; ++j) expect += w[j] * e.at(i, j, k);
      EXPECT_NEAR(h(i, k), 0.7 * expect, 1e-12);
    }
  }
}

TEST(MaskAttention, SingleToken) {
  nn::Matrix h(1, 3);
  h << 0.3, -2.0, 1.5;
  EXPECT_TRUE(MaskAttention(h, 10).isApprox(h, 1e-15));
}

TEST(MaskAttention, WindowZeroesDistantWeights) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  nn::Matrix h(25, 4);
  for (Eigen::Index k = 0; k < h.size(); ++k) h.data()[k] = normal(rng);
  const nn::Matrix a = AttentionWeights(h, 10);
  EXPECT_EQ(a(0, 20), 0.0);
  EXPECT_EQ(a(20, 0), 0.0);
  EXPECT_GT(a(0, 9), 0.0);
  EXPECT_EQ(a(0, 10), 0.0);
  for (Eigen::Index r = 0; r < a.rows(); ++r) EXPECT_NEAR(a.row(r).sum(), 1.0, 1e-12);
}

TEST(MaskAttention, SymmetricPair) {
  nn::Matrix h(2, 1);
  h << 1.0, 1.0;
  const nn::Matrix a = AttentionWeights(h, 2);
  EXPECT_DOUBLE_EQ(a(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(a(0, 1), 0.5);
  const nn::Matrix c = MaskAttention(h, 2);
  EXPECT_DOUBLE_EQ(c(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(c(1, 0), 1.0);
}

TEST(MaskAttention, GraphMatchesValueVersion) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  nn::Matrix h(12, 3);
  for (Eigen::Index k = 0; k < h.size(); ++k) h.data()[k] = normal(rng);
  nn::Tape tape;
  const nn::Var c = MaskAttention(tape.Constant(h), 4);
  EXPECT_TRUE(c.value().isApprox(MaskAttention(h, 4), 1e-14));
}

TEST(WindowMask, Band) {
  const nn::BoolMatrix m = WindowMask(5, 2);
  EXPECT_TRUE(m(2, 1));
  EXPECT_TRUE(m(2, 3));
  EXPECT_FALSE(m(2, 4));
  EXPECT_EQ(WindowMask(5, 1).count(), 5);  // diagonal only
}

}  // namespace
}  // namespace evcoref
