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

#include "evcoref/decoder.h"

#include <map>
#include <memory>

namespace evcoref {
namespace {

enum class LinkRule { kBeatTypeScore, kPositive };

Decoding Run(const ScoreTable& table, LinkRule rule, const DecodeOptions& options) {
  const std::size_t l = table.spans.size();
  Decoding out;
  out.assignment.assign(l, -1);
  out.link.assign(l, -1);
  // std::vector<bool> has no contiguous storage for std::span.
  std::unique_ptr<bool[]> eligible_storage(new bool[l]());
  for (std::size_t i = 0; i < l; ++i) {
    const SpanScores& span = table.spans[i];
    if (IsNonMention(span)) {
      if (options.keep_filtered_candidates) eligible_storage[i] = true;
      continue;
    }
    const std::span<const bool> eligible(eligible_storage.get(), l);
    const auto best = FindBestAntecedent(span, eligible);
    const int type = BestType(span);
    bool link = false;
    if (best) {
      link = rule == LinkRule::kBeatTypeScore
                 ? best->score > span.type_scores[static_cast<std::size_t>(type)]
                 : best->score > 0.0;
    }
    int chain = -1;
    if (link) chain = out.assignment[static_cast<std::size_t>(best->span)];
    if (chain < 0) {
      // Antecedent was a kept non-mention with no chain of its own.
      chain = static_cast<int>(out.chains.chains.size());
      out.chains.chains.push_back({type, {}});
      link = false;
    }
    out.chains.chains[static_cast<std::size_t>(chain)].members.push_back(span.token);
    out.assignment[i] = chain;
    out.link[i] = link ? best->span : -1;
    eligible_storage[i] = true;
  }
  return out;
}

}  // namespace

bool IsNonMention(const SpanScores& span) {
  for (const AntecedentScore& a : span.antecedents) {
    if (a.score > 0.0) return false;
  }
  for (double s : span.type_scores) {
    if (s > 0.0) return false;
  }
  return true;
}

std::optional<BestAntecedent> FindBestAntecedent(const SpanScores& span,
                                                 std::span<const bool> eligible) {
  std::optional<BestAntecedent> best;
  for (const AntecedentScore& a : span.antecedents) {
    if (a.span < 0 || static_cast<std::size_t>(a.span) >= eligible.size() ||
        !eligible[static_cast<std::size_t>(a.span)]) {
      continue;
    }
    if (!best || a.score > best->score ||
        (a.score == best->score && a.span > best->span)) {
      best = BestAntecedent{a.span, a.score};
    }
  }
  return best;
}

int BestType(const SpanScores& span) {
  int best = 0;
  for (std::size_t k = 1; k < span.type_scores.size(); ++k) {
    if (span.type_scores[k] > span.type_scores[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(k);
    }
  }
  return best;
}

Decoding DecodeTypeGuided(const ScoreTable& table, const DecodeOptions& options) {
  return Run(table, LinkRule::kBeatTypeScore, options);
}

Decoding DecodeNaive(const ScoreTable& table, const DecodeOptions& options) {
  return Run(table, LinkRule::kPositive, options);
}

ChainSet Decode(const ScoreTable& table, const DecodeOptions& options) {
  return DecodeTypeGuided(table, options).chains;
}

ChainSet NaiveDecode(const ScoreTable& table, const DecodeOptions& options) {
  return DecodeNaive(table, options).chains;
}

ChainSet TypeRuleDecode(std::span<const TypedMention> mentions) {
  std::map<int, Chain> by_type;
  for (const TypedMention& m : mentions) {
    Chain& chain = by_type[m.event_type];
    chain.event_type = m.event_type;
    chain.members.push_back(m.token);
  }
  ChainSet set;
  for (auto& [type, chain] : by_type) set.chains.push_back(std::move(chain));
  return Normalize(std::move(set));
}

std::vector<TypedMention> PredictedMentions(const ScoreTable& table) {
  std::vector<TypedMention> out;
  for (const SpanScores& span : table.spans) {
    if (!IsNonMention(span)) out.push_back({span.token, BestType(span)});
  }
  return out;
}

ChainSet DecodeWithMode(const ScoreTable& table, DecodeMode mode,
                        const DecodeOptions& options) {
  switch (mode) {
    case DecodeMode::kTypeGuided:
      return Decode(table, options);
    case DecodeMode::kNaive:
      return NaiveDecode(table, options);
    case DecodeMode::kTypeRule:
      return TypeRuleDecode(PredictedMentions(table));
  }
  return {};
}

}  // namespace evcoref
