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

#ifndef EVCOREF_METRICS_H_
#define EVCOREF_METRICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evcoref/corpus.h"
#include "evcoref/decoder.h"

namespace evcoref {

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// 2PR / (P + R), 0 when P + R = 0.
double F1(double precision, double recall);
Prf MakePrf(double precision, double recall);

// Coreference metrics compare partitions by token index; chain types are
// ignored. Mentions present on only one side count as unmatched.
Prf Muc(const ChainSet& gold, const ChainSet& sys);
Prf BCubed(const ChainSet& gold, const ChainSet& sys);
// Entity-level CEAF with phi4 similarity and an optimal one-to-one chain
// alignment.
Prf CeafE(const ChainSet& gold, const ChainSet& sys);
// Exhaustive alignment; at most kBruteForceCeafLimit chains per side.
inline constexpr int kBruteForceCeafLimit = 8;
Prf BruteForceCeafE(const ChainSet& gold, const ChainSet& sys);
Prf Blanc(const ChainSet& gold, const ChainSet& sys);

// Exact (token, type) matching. For chain sets, a mention's type is its
// chain's type.
Prf TypeF1(std::span<const TypedMention> gold, std::span<const TypedMention> sys);
Prf TypeF1(const ChainSet& gold, const ChainSet& sys);
std::vector<TypedMention> TypedMentions(const ChainSet& chains);

struct MetricReport {
  Prf muc;
  Prf b_cubed;
  Prf ceaf_e;
  Prf blanc;
  Prf type;
  double avg_f = 0.0;
};

// Unweighted mean of the four coreference F1 scores.
double AvgF(const MetricReport& report);

// Sufficient statistics of every metric, summed over documents before the
// final ratios are taken (micro-averaging).
struct MetricCounts {
  double muc_recall_num = 0, muc_recall_den = 0;
  double muc_precision_num = 0, muc_precision_den = 0;
  double b3_precision_num = 0, b3_precision_den = 0;
  double b3_recall_num = 0, b3_recall_den = 0;
  double ceaf_similarity = 0, ceaf_sys_chains = 0, ceaf_gold_chains = 0;
  double blanc_coref_common = 0, blanc_coref_sys = 0, blanc_coref_gold = 0;
  double blanc_non_common = 0, blanc_non_sys = 0, blanc_non_gold = 0;
  double unmatched_mentions = 0;
  double type_common = 0, type_sys = 0, type_gold = 0;

  void AddDocument(const ChainSet& gold, const ChainSet& sys);
  void Merge(const MetricCounts& other);
  MetricReport Report() const;
};

MetricReport Evaluate(const ChainSet& gold, const ChainSet& sys);
MetricReport Evaluate(std::span<const ChainSet> gold, std::span<const ChainSet> sys);

// Human-readable table.
std::string FormatReport(const MetricReport& report);
// "metric=<name> p=<P> r=<R> f=<F>" lines plus "metric=avg_f f=<F>".
std::string FormatReportMachine(const MetricReport& report);

}  // namespace evcoref

#endif  // EVCOREF_METRICS_H_
