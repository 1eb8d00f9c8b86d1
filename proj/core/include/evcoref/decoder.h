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

#ifndef EVCOREF_DECODER_H_
#define EVCOREF_DECODER_H_

#include <optional>
#include <span>
#include <vector>

#include "evcoref/corpus.h"
#include "evcoref/score_table.h"

namespace evcoref {

enum class DecodeMode { kTypeGuided, kNaive, kTypeRule };

struct DecodeOptions {
  // Non-mention spans stay eligible as antecedents for later spans.
  bool keep_filtered_candidates = false;
};

// A span is a non-mention when all of its antecedent scores and all of its
// type scores are <= 0.
bool IsNonMention(const SpanScores& span);

struct BestAntecedent {
  int span = 0;
  double score = 0.0;
};

// argmax of s(i, j) over antecedents whose span ordinal is eligible; ties
// go to the nearer (larger ordinal) span.
std::optional<BestAntecedent> FindBestAntecedent(const SpanScores& span,
                                                 std::span<const bool> eligible);

// argmax_k s(i, t_k) excluding eps; ties go to the lower ordinal.
int BestType(const SpanScores& span);

// One entry per retained span: the chain index it joined, or -1 for eps.
struct Decoding {
  ChainSet chains;
  std::vector<int> assignment;
  std::vector<int> link;  // antecedent span ordinal, or -1 when a chain was started / eps
};

// Type-guided: link to a_i only when s(i, a_i) > s(i, t_i), otherwise start
// a chain typed t_i.
Decoding DecodeTypeGuided(const ScoreTable& table, const DecodeOptions& options = {});
// Naive: link to a_i whenever s(i, a_i) > 0.
Decoding DecodeNaive(const ScoreTable& table, const DecodeOptions& options = {});

ChainSet Decode(const ScoreTable& table, const DecodeOptions& options = {});
ChainSet NaiveDecode(const ScoreTable& table, const DecodeOptions& options = {});

struct TypedMention {
  int token = 0;
  int event_type = 0;
};

// One chain per type present.
ChainSet TypeRuleDecode(std::span<const TypedMention> mentions);

// Non-filtered spans with their best types, as fed to TypeRuleDecode.
std::vector<TypedMention> PredictedMentions(const ScoreTable& table);

ChainSet DecodeWithMode(const ScoreTable& table, DecodeMode mode,
                        const DecodeOptions& options = {});

}  // namespace evcoref

#endif  // EVCOREF_DECODER_H_
