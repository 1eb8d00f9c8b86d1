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

#ifndef EVCOREF_SCORE_TABLE_H_
#define EVCOREF_SCORE_TABLE_H_

#include <vector>

namespace evcoref {

// s(i, eps); fixed, never learned.
inline constexpr double kDummyScore = 0.0;

struct AntecedentScore {
  int span = 0;             // ordinal of the antecedent among retained spans
  double score = 0.0;       // s(i, j) = s_m(i) + s_m(j) + s_a(i, j)
  double similarity = 0.0;  // s_a(i, j)
};

struct SpanScores {
  int token = 0;
  double mention_score = 0.0;                // s_m(i)
  std::vector<AntecedentScore> antecedents;  // ascending span ordinal
  std::vector<double> type_scores;           // s(i, t_k)
  std::vector<double> type_similarity;       // s_a(i, t_k)
};

// Scores for the retained spans of one document, for one pass. Spans are
// in document order.
struct ScoreTable {
  std::vector<SpanScores> spans;
  std::vector<double> type_mention_scores;  // s_m(t_k)

  int num_types() const { return static_cast<int>(type_mention_scores.size()); }
  std::vector<int> retained_tokens() const {
    std::vector<int> out;
    out.reserve(spans.size());
    for (const SpanScores& s : spans) out.push_back(s.token);
    return out;
  }
};

}  // namespace evcoref

#endif  // EVCOREF_SCORE_TABLE_H_
