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

#include "evcoref/metrics.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "evcoref/assignment.h"

namespace evcoref {
namespace {

double Ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double Pairs(double n) { return n * (n - 1.0) / 2.0; }

// Token -> chain ordinal.
std::map<int, int> ChainOf(const ChainSet& set) {
  std::map<int, int> out;
  for (std::size_t c = 0; c < set.chains.size(); ++c) {
    for (int m : set.chains[c].members) out[m] = static_cast<int>(c);
  }
  return out;
}

std::size_t Overlap(const std::vector<int>& a, const std::vector<int>& b) {
  // Members are kept sorted by Normalize; fall back to sets otherwise.
  if (std::is_sorted(a.begin(), a.end()) && std::is_sorted(b.begin(), b.end())) {
    std::size_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
      if (*i < *j) {
        ++i;
      } else if (*j < *i) {
        ++j;
      } else {
        ++n, ++i, ++j;
      }
    }
    return n;
  }
  const std::set<int> sa(a.begin(), a.end());
  std::size_t n = 0;
  for (int x : b) n += sa.count(x);
  return n;
}

// MUC recall numerator/denominator of `key` partitioned by `response`.
std::pair<double, double> MucCounts(const ChainSet& key, const ChainSet& response) {
  const auto owner = ChainOf(response);
  double num = 0.0, den = 0.0;
  for (const Chain& k : key.chains) {
    std::set<int> parts;
    int loose = 0;
    for (int m : k.members) {
      auto it = owner.find(m);
      if (it == owner.end()) {
        ++loose;
      } else {
        parts.insert(it->second);
      }
    }
    const double size = static_cast<double>(k.members.size());
    num += size - static_cast<double>(parts.size() + loose);
    den += size - 1.0;
  }
  return {num, den};
}

// B3 sum over `a`'s mentions of |A_m cap B_m| / |A_m|, and mention count.
std::pair<double, double> BCubedCounts(const ChainSet& a, const ChainSet& b) {
  const auto owner = ChainOf(b);
  double num = 0.0, den = 0.0;
  for (const Chain& chain : a.chains) {
    for (int m : chain.members) {
      den += 1.0;
      auto it = owner.find(m);
      if (it == owner.end()) continue;
      const Chain& other = b.chains[static_cast<std::size_t>(it->second)];
      num += static_cast<double>(Overlap(chain.members, other.members)) /
             static_cast<double>(chain.members.size());
    }
  }
  return {num, den};
}

// Exact non-negative rational used to total phi4 similarities, so that
// alignments with equal real-valued totals produce identical doubles.
struct Fraction {
  __int128 num = 0;
  __int128 den = 1;

  static __int128 Gcd(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  Fraction& operator+=(const Fraction& o) {
    const __int128 g = Gcd(den, o.den);
    num = num * (o.den / g) + o.num * (den / g);
    den = den / g * o.den;
    const __int128 r = Gcd(num, den);
    if (r > 1) {
      num /= r;
      den /= r;
    }
    return *this;
  }

  long double ToLongDouble() const {
    return static_cast<long double>(num) / static_cast<long double>(den);
  }
  double ToDouble() const { return static_cast<double>(ToLongDouble()); }

  bool operator>(const Fraction& o) const {
    __int128 lhs, rhs;
    if (!__builtin_mul_overflow(num, o.den, &lhs) &&
        !__builtin_mul_overflow(o.num, den, &rhs)) {
      return lhs > rhs;
    }
    return ToLongDouble() > o.ToLongDouble();
  }
};

Fraction Phi4(const Chain& k, const Chain& r) {
  Fraction f;
  f.num = 2 * static_cast<__int128>(Overlap(k.members, r.members));
  f.den = static_cast<__int128>(k.members.size() + r.members.size());
  const __int128 g = Fraction::Gcd(f.num, f.den);
  if (g > 1) {
    f.num /= g;
    f.den /= g;
  }
  return f;
}

Prf CeafFromSimilarity(double similarity, std::size_t gold_chains,
                       std::size_t sys_chains) {
  return MakePrf(Ratio(similarity, static_cast<double>(sys_chains)),
                 Ratio(similarity, static_cast<double>(gold_chains)));
}

double CeafSimilarity(const ChainSet& gold, const ChainSet& sys) {
  if (gold.chains.empty() || sys.chains.empty()) return 0.0;
  std::vector<std::vector<double>> weight(gold.chains.size(),
                                          std::vector<double>(sys.chains.size()));
  for (std::size_t i = 0; i < gold.chains.size(); ++i) {
    for (std::size_t j = 0; j < sys.chains.size(); ++j) {
      weight[i][j] = Phi4(gold.chains[i], sys.chains[j]).ToDouble();
    }
  }
  const std::vector<int> match = MaxWeightAssignment(weight);
  Fraction total;
  for (std::size_t i = 0; i < match.size(); ++i) {
    if (match[i] >= 0) {
      total += Phi4(gold.chains[i], sys.chains[static_cast<std::size_t>(match[i])]);
    }
  }
  return total.ToDouble();
}

void BruteForce(const ChainSet& gold, const ChainSet& sys, std::size_t i,
                std::vector<char>& used, Fraction current, Fraction& best) {
  if (i == gold.chains.size()) {
    if (current > best) best = current;
    return;
  }
  BruteForce(gold, sys, i + 1, used, current, best);
  for (std::size_t j = 0; j < sys.chains.size(); ++j) {
    if (used[j]) continue;
    used[j] = 1;
    Fraction next = current;
    next += Phi4(gold.chains[i], sys.chains[j]);
    BruteForce(gold, sys, i + 1, used, next, best);
    used[j] = 0;
  }
}

// Mentions covered by exactly one side.
double UnmatchedMentions(const ChainSet& gold, const ChainSet& sys) {
  const auto g = ChainOf(gold);
  const auto s = ChainOf(sys);
  double n = 0.0;
  for (const auto& [m, c] : g) n += s.count(m) == 0 ? 1.0 : 0.0;
  for (const auto& [m, c] : s) n += g.count(m) == 0 ? 1.0 : 0.0;
  return n;
}

struct BlancCounts {
  double coref_common = 0, coref_sys = 0, coref_gold = 0;
  double non_common = 0, non_sys = 0, non_gold = 0;
};

BlancCounts CountBlanc(const ChainSet& gold, const ChainSet& sys) {
  BlancCounts b;
  const auto g_owner = ChainOf(gold);
  const auto s_owner = ChainOf(sys);
  for (const Chain& c : gold.chains) b.coref_gold += Pairs(static_cast<double>(c.members.size()));
  for (const Chain& c : sys.chains) b.coref_sys += Pairs(static_cast<double>(c.members.size()));
  b.non_gold = Pairs(static_cast<double>(g_owner.size())) - b.coref_gold;
  b.non_sys = Pairs(static_cast<double>(s_owner.size())) - b.coref_sys;

  // Restrict both partitions to the mentions they share.
  std::map<std::pair<int, int>, double> cell;
  std::map<int, double> gold_part, sys_part;
  double common = 0.0;
  for (const auto& [m, gc] : g_owner) {
    auto it = s_owner.find(m);
    if (it == s_owner.end()) continue;
    common += 1.0;
    cell[{gc, it->second}] += 1.0;
    gold_part[gc] += 1.0;
    sys_part[it->second] += 1.0;
  }
  double same_gold = 0.0, same_sys = 0.0;
  for (const auto& [k, n] : cell) b.coref_common += Pairs(n);
  for (const auto& [k, n] : gold_part) same_gold += Pairs(n);
  for (const auto& [k, n] : sys_part) same_sys += Pairs(n);
  b.non_common = Pairs(common) - same_gold - same_sys + b.coref_common;
  return b;
}

Prf BlancFromCounts(const MetricCounts& c) {
  double p = 0.0, r = 0.0, f = 0.0;
  int parts = 0;
  if (c.blanc_coref_gold > 0.0 || c.blanc_coref_sys > 0.0) {
    const double pc = Ratio(c.blanc_coref_common, c.blanc_coref_sys);
    const double rc = Ratio(c.blanc_coref_common, c.blanc_coref_gold);
    p += pc, r += rc, f += F1(pc, rc), ++parts;
  }
  if (c.blanc_non_gold > 0.0 || c.blanc_non_sys > 0.0) {
    const double pn = Ratio(c.blanc_non_common, c.blanc_non_sys);
    const double rn = Ratio(c.blanc_non_common, c.blanc_non_gold);
    p += pn, r += rn, f += F1(pn, rn), ++parts;
  }
  if (parts == 0) {
    // No links on either side: perfect only when the mention sets agree.
    const double v = c.unmatched_mentions == 0.0 ? 1.0 : 0.0;
    return {v, v, v};
  }
  return {p / parts, r / parts, f / parts};
}

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

double F1(double precision, double recall) {
  const double s = precision + recall;
  return s == 0.0 ? 0.0 : 2.0 * precision * recall / s;
}

Prf MakePrf(double precision, double recall) {
  return {precision, recall, F1(precision, recall)};
}

Prf Muc(const ChainSet& gold, const ChainSet& sys) {
  const auto [rn, rd] = MucCounts(gold, sys);
  const auto [pn, pd] = MucCounts(sys, gold);
  return MakePrf(Ratio(pn, pd), Ratio(rn, rd));
}

Prf BCubed(const ChainSet& gold, const ChainSet& sys) {
  const auto [pn, pd] = BCubedCounts(sys, gold);
  const auto [rn, rd] = BCubedCounts(gold, sys);
  return MakePrf(Ratio(pn, pd), Ratio(rn, rd));
}

Prf CeafE(const ChainSet& gold, const ChainSet& sys) {
  return CeafFromSimilarity(CeafSimilarity(gold, sys), gold.chains.size(),
                            sys.chains.size());
}

Prf BruteForceCeafE(const ChainSet& gold, const ChainSet& sys) {
  if (gold.chains.size() > kBruteForceCeafLimit ||
      sys.chains.size() > kBruteForceCeafLimit) {
    throw std::invalid_argument("brute-force CEAF limited to " +
                                std::to_string(kBruteForceCeafLimit) +
                                " chains per side");
  }
  Fraction best;
  std::vector<char> used(sys.chains.size(), 0);
  BruteForce(gold, sys, 0, used, Fraction{}, best);
  return CeafFromSimilarity(best.ToDouble(), gold.chains.size(), sys.chains.size());
}

Prf Blanc(const ChainSet& gold, const ChainSet& sys) {
  MetricCounts c;
  const BlancCounts b = CountBlanc(gold, sys);
  c.blanc_coref_common = b.coref_common;
  c.blanc_coref_sys = b.coref_sys;
  c.blanc_coref_gold = b.coref_gold;
  c.blanc_non_common = b.non_common;
  c.blanc_non_sys = b.non_sys;
  c.blanc_non_gold = b.non_gold;
  c.unmatched_mentions = UnmatchedMentions(gold, sys);
  return BlancFromCounts(c);
}

std::vector<TypedMention> TypedMentions(const ChainSet& chains) {
  std::vector<TypedMention> out;
  for (const Chain& c : chains.chains) {
    for (int m : c.members) out.push_back({m, c.event_type});
  }
  return out;
}

Prf TypeF1(std::span<const TypedMention> gold, std::span<const TypedMention> sys) {
  std::set<std::pair<int, int>> g, s;
  for (const TypedMention& m : gold) g.emplace(m.token, m.event_type);
  for (const TypedMention& m : sys) s.emplace(m.token, m.event_type);
  double common = 0.0;
  for (const auto& x : s) common += g.count(x);
  return MakePrf(Ratio(common, static_cast<double>(s.size())),
                 Ratio(common, static_cast<double>(g.size())));
}

Prf TypeF1(const ChainSet& gold, const ChainSet& sys) {
  const auto g = TypedMentions(gold);
  const auto s = TypedMentions(sys);
  return TypeF1(g, s);
}

double AvgF(const MetricReport& report) {
  return (report.muc.f1 + report.b_cubed.f1 + report.ceaf_e.f1 + report.blanc.f1) /
         4.0;
}

void MetricCounts::AddDocument(const ChainSet& gold, const ChainSet& sys) {
  const auto [mrn, mrd] = MucCounts(gold, sys);
  const auto [mpn, mpd] = MucCounts(sys, gold);
  muc_recall_num += mrn, muc_recall_den += mrd;
  muc_precision_num += mpn, muc_precision_den += mpd;
  const auto [bpn, bpd] = BCubedCounts(sys, gold);
  const auto [brn, brd] = BCubedCounts(gold, sys);
  b3_precision_num += bpn, b3_precision_den += bpd;
  b3_recall_num += brn, b3_recall_den += brd;
  ceaf_similarity += CeafSimilarity(gold, sys);
  ceaf_sys_chains += static_cast<double>(sys.chains.size());
  ceaf_gold_chains += static_cast<double>(gold.chains.size());
  const BlancCounts b = CountBlanc(gold, sys);
  blanc_coref_common += b.coref_common;
  blanc_coref_sys += b.coref_sys;
  blanc_coref_gold += b.coref_gold;
  blanc_non_common += b.non_common;
  blanc_non_sys += b.non_sys;
  blanc_non_gold += b.non_gold;
  unmatched_mentions += UnmatchedMentions(gold, sys);

  std::set<std::pair<int, int>> g, s;
  for (const TypedMention& m : TypedMentions(gold)) g.emplace(m.token, m.event_type);
  for (const TypedMention& m : TypedMentions(sys)) s.emplace(m.token, m.event_type);
  for (const auto& x : s) type_common += g.count(x);
  type_sys += static_cast<double>(s.size());
  type_gold += static_cast<double>(g.size());
}

void MetricCounts::Merge(const MetricCounts& o) {
  muc_recall_num += o.muc_recall_num, muc_recall_den += o.muc_recall_den;
  muc_precision_num += o.muc_precision_num, muc_precision_den += o.muc_precision_den;
  b3_precision_num += o.b3_precision_num, b3_precision_den += o.b3_precision_den;
  b3_recall_num += o.b3_recall_num, b3_recall_den += o.b3_recall_den;
  ceaf_similarity += o.ceaf_similarity;
  ceaf_sys_chains += o.ceaf_sys_chains, ceaf_gold_chains += o.ceaf_gold_chains;
  blanc_coref_common += o.blanc_coref_common;
  blanc_coref_sys += o.blanc_coref_sys, blanc_coref_gold += o.blanc_coref_gold;
  blanc_non_common += o.blanc_non_common;
  blanc_non_sys += o.blanc_non_sys, blanc_non_gold += o.blanc_non_gold;
  unmatched_mentions += o.unmatched_mentions;
  type_common += o.type_common, type_sys += o.type_sys, type_gold += o.type_gold;
}

MetricReport MetricCounts::Report() const {
  MetricReport r;
  r.muc = MakePrf(Ratio(muc_precision_num, muc_precision_den),
                  Ratio(muc_recall_num, muc_recall_den));
  r.b_cubed = MakePrf(Ratio(b3_precision_num, b3_precision_den),
                      Ratio(b3_recall_num, b3_recall_den));
  r.ceaf_e = MakePrf(Ratio(ceaf_similarity, ceaf_sys_chains),
                     Ratio(ceaf_similarity, ceaf_gold_chains));
  r.blanc = BlancFromCounts(*this);
  r.type = MakePrf(Ratio(type_common, type_sys), Ratio(type_common, type_gold));
  r.avg_f = AvgF(r);
  return r;
}

MetricReport Evaluate(const ChainSet& gold, const ChainSet& sys) {
  MetricCounts c;
  c.AddDocument(gold, sys);
  return c.Report();
}

MetricReport Evaluate(std::span<const ChainSet> gold, std::span<const ChainSet> sys) {
  if (gold.size() != sys.size()) {
    throw std::invalid_argument("Evaluate: document count mismatch");
  }
  MetricCounts c;
  for (std::size_t i = 0; i < gold.size(); ++i) c.AddDocument(gold[i], sys[i]);
  return c.Report();
}

std::string FormatReport(const MetricReport& r) {
  std::ostringstream out;
  out << "metric      P       R       F\n";
  auto row = [&](const char* name, const Prf& m) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-8s %7.2f %7.2f %7.2f\n", name,
                  100.0 * m.precision, 100.0 * m.recall, 100.0 * m.f1);
    out << buf;
  };
  row("MUC", r.muc);
  row("B3", r.b_cubed);
  row("CEAFe", r.ceaf_e);
  row("BLANC", r.blanc);
  row("Type", r.type);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "AVG-F    %23.2f\n", 100.0 * r.avg_f);
  out << buf;
  return out.str();
}

std::string FormatReportMachine(const MetricReport& r) {
  std::ostringstream out;
  auto line = [&](const char* name, const Prf& m) {
    out << "metric=" << name << " p=" << Fixed(m.precision) << " r=" << Fixed(m.recall)
        << " f=" << Fixed(m.f1) << '\n';
  };
  line("muc", r.muc);
  line("b3", r.b_cubed);
  line("ceafe", r.ceaf_e);
  line("blanc", r.blanc);
  line("type", r.type);
  out << "metric=avg_f f=" << Fixed(r.avg_f) << '\n';
  return out.str();
}

}  // namespace evcoref
