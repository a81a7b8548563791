// Copyright 2026 The entrain Authors.
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

#include "entrain/measures.h"

#include <cmath>
#include <iterator>
#include <set>
#include <utility>

#include "entrain/error.h"
#include "entrain/rng.h"

namespace entrain {

namespace {

MeasureResult not_evaluable(Measure m, std::string note, std::size_t n = 0) {
  MeasureResult r;
  r.measure = m;
  r.status = Status::kNotEvaluable;
  r.n = n;
  r.note = std::move(note);
  return r;
}

// t-based measures where a negative t (partner closer) is the entraining
// direction.
void label_t(MeasureResult& r, double alpha, std::string_view positive) {
  if (r.p >= alpha) {
    r.label = "NOT_SIGNIFICANT";
  } else if (r.statistic < 0.0) {
    r.detected = true;
    r.label = std::string(positive);
  } else {
    r.label = "SIGNIFICANT_OPPOSITE";
  }
}

void label_r(MeasureResult& r, double alpha) {
  if (r.p >= alpha) {
    r.label = "NOT_SIGNIFICANT";
    return;
  }
  r.label = std::string(strength_label(r.statistic).name());
  r.detected = r.statistic > 0.0;
}

MeasureResult from_paired(Measure m, const std::vector<double>& a,
                          const std::vector<double>& b, double alpha,
                          std::string_view positive) {
  MeasureResult r;
  r.measure = m;
  try {
    const StatResult t = paired_ttest(a, b);
    r.status = Status::kOk;
    r.statistic = t.statistic;
    r.p = t.p;
    r.n = t.n;
    label_t(r, alpha, positive);
  } catch (const DegenerateError& e) {
    return not_evaluable(m, e.what(), a.size());
  }
  return r;
}

}  // namespace

void FeatureSeries::validate() const {
  for (std::size_t i = 1; i < turns.size(); ++i) {
    if (turns[i].turn_index <= turns[i - 1].turn_index)
      throw ContractViolation("series " + conversation_id + "/" + feature +
                              ": turn indices must increase");
    if (turns[i].speaker_id == turns[i - 1].speaker_id)
      throw ContractViolation("series " + conversation_id + "/" + feature +
                              ": adjacent turns share a speaker");
  }
}

std::string_view measure_name(Measure m) {
  switch (m) {
    case Measure::kTurnProx:
      return "TURN_PROX";
    case Measure::kTurnConv:
      return "TURN_CONV";
    case Measure::kTurnSync:
      return "TURN_SYNC";
    case Measure::kConvProx:
      return "CONV_PROX";
    case Measure::kConvConv:
      return "CONV_CONV";
  }
  return "?";
}

std::string_view status_name(Status s) {
  switch (s) {
    case Status::kOk:
      return "OK";
    case Status::kNotEvaluable:
      return "NOT_EVALUABLE";
    case Status::kSkipped:
      return "SKIPPED";
    case Status::kFailed:
      return "FAILED";
  }
  return "?";
}

MeasureResult turn_proximity(const FeatureSeries& s, std::uint64_t seed,
                             const ProximityOptions& opts,
                             ProximityPairs* pairs) {
  const auto& t = s.turns;
  std::size_t present = 0;
  for (const auto& tv : t) present += tv.value.has_value();
  if (present < opts.min_turns) {
    auto r = not_evaluable(Measure::kTurnProx,
                           "needs " + std::to_string(opts.min_turns) +
                               " turns with values, has " +
                               std::to_string(present));
    r.seed = seed;
    return r;
  }

  Rng rng(seed);
  ProximityPairs local;
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (!t[k].value || !t[k - 1].value) continue;
    const double v = *t[k].value;
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (j + 1 == k || j == k + 1 || j == k) continue;
      if (t[j].speaker_id == t[k].speaker_id || !t[j].value) continue;
      candidates.push_back(j);
    }
    if (candidates.empty()) continue;
    double other = 0.0;
    const auto picks =
        rng.sample_without_replacement(candidates.size(), opts.other_sample);
    for (auto i : picks) other += std::abs(v - *t[candidates[i]].value);
    local.partner.push_back(std::abs(v - *t[k - 1].value));
    local.other.push_back(other / static_cast<double>(picks.size()));
  }
  if (pairs != nullptr) {
    pairs->partner.insert(pairs->partner.end(), local.partner.begin(),
                          local.partner.end());
    pairs->other.insert(pairs->other.end(), local.other.begin(),
                        local.other.end());
  }
  auto r = from_paired(Measure::kTurnProx, local.partner, local.other,
                       opts.alpha, "PROXIMITY");
  r.seed = seed;
  return r;
}

MeasureResult turn_convergence(const FeatureSeries& s, double alpha) {
  std::vector<double> d;
  std::vector<double> idx;
  for (std::size_t k = 1; k < s.turns.size(); ++k) {
    const auto& a = s.turns[k - 1];
    const auto& b = s.turns[k];
    if (!a.value || !b.value || a.speaker_id == b.speaker_id) continue;
    d.push_back(std::abs(*b.value - *a.value));
    idx.push_back(static_cast<double>(b.turn_index));
  }
  if (d.size() < 4)
    return not_evaluable(Measure::kTurnConv,
                         "needs 4 adjacent differences, has " +
                             std::to_string(d.size()),
                         d.size());
  try {
    const StatResult pr = pearson(d, idx);
    MeasureResult r;
    r.measure = Measure::kTurnConv;
    r.status = Status::kOk;
    r.raw_r = pr.statistic;
    r.statistic = -pr.statistic;
    r.p = pr.p;
    r.n = pr.n;
    label_r(r, alpha);
    return r;
  } catch (const DegenerateError& e) {
    return not_evaluable(Measure::kTurnConv, e.what(), d.size());
  }
}

MeasureResult turn_synchrony(const FeatureSeries& s, SyncDirection dir,
                             double alpha) {
  std::vector<double> lead;
  std::vector<double> follow;
  const std::string first = s.turns.empty() ? "" : s.turns[0].speaker_id;
  for (std::size_t k = 1; k < s.turns.size(); ++k) {
    const auto& a = s.turns[k - 1];
    const auto& b = s.turns[k];
    if (!a.value || !b.value || a.speaker_id == b.speaker_id) continue;
    if (dir == SyncDirection::kFirstLeads && a.speaker_id != first) continue;
    if (dir == SyncDirection::kSecondLeads && a.speaker_id == first) continue;
    lead.push_back(*a.value);
    follow.push_back(*b.value);
  }
  if (lead.size() < 3)
    return not_evaluable(Measure::kTurnSync,
                         "needs 3 adjacent pairs, has " +
                             std::to_string(lead.size()),
                         lead.size());
  try {
    const StatResult pr = pearson(lead, follow);
    MeasureResult r;
    r.measure = Measure::kTurnSync;
    r.status = Status::kOk;
    r.raw_r = pr.statistic;
    r.statistic = pr.statistic;
    r.p = pr.p;
    r.n = pr.n;
    label_r(r, alpha);
    return r;
  } catch (const DegenerateError& e) {
    return not_evaluable(Measure::kTurnSync, e.what(), lead.size());
  }
}

ConvProximityResult conv_proximity(const std::vector<SpeakerMean>& means,
                                   double alpha) {
  ConvProximityResult out;
  std::map<std::string, std::vector<const SpeakerMean*>> by_conv;
  for (const auto& m : means) by_conv[m.conversation_id].push_back(&m);
  if (by_conv.size() < 2) {
    out.corpus = not_evaluable(Measure::kConvProx, "no non-partners");
    return out;
  }

  std::vector<double> partner;
  std::vector<double> other;
  std::map<std::string, std::vector<std::pair<double, std::vector<double>>>>
      conv_groups;
  for (const auto& m : means) {
    const auto& mine = by_conv[m.conversation_id];
    if (mine.size() != 2) continue;
    const SpeakerMean* p = mine[0] == &m ? mine[1] : mine[0];
    const double pd = std::abs(m.value - p->value);
    std::vector<double> others;
    for (const auto& o : means) {
      if (o.conversation_id == m.conversation_id) continue;
      others.push_back(std::abs(m.value - o.value));
    }
    partner.push_back(pd);
    other.push_back(mean(others));
    conv_groups[m.conversation_id].emplace_back(pd, std::move(others));
  }
  out.corpus =
      from_paired(Measure::kConvProx, partner, other, alpha, "PROXIMITY");
  for (const auto& [conv, groups] : conv_groups) {
    MeasureResult r;
    r.measure = Measure::kConvProx;
    try {
      const RankTestResult t = rank_test(groups, true);
      r.status = Status::kOk;
      double diff = 0.0;
      for (const auto& [pd, others] : groups) diff += pd - mean(others);
      r.statistic = diff / static_cast<double>(groups.size());
      r.p = t.p;
      r.n = t.n;
      r.detected = t.p < alpha;
      r.label = r.detected ? "PROXIMITY" : "NOT_SIGNIFICANT";
    } catch (const DegenerateError& e) {
      r = not_evaluable(Measure::kConvProx, e.what(), 0);
    }
    out.per_conversation[conv] = std::move(r);
  }
  return out;
}

ConvConvergenceResult conv_convergence(const std::vector<FeatureSeries>& all,
                                       double alpha) {
  ConvConvergenceResult out;
  for (const auto& s : all) {
    const std::size_t half = s.turns.size() / 2;
    std::array<std::map<std::string, std::pair<double, std::size_t>>, 2> acc;
    std::set<std::string> speakers;
    for (std::size_t k = 0; k < s.turns.size(); ++k) {
      speakers.insert(s.turns[k].speaker_id);
      if (!s.turns[k].value) continue;
      auto& slot = acc[k < half ? 0 : 1][s.turns[k].speaker_id];
      slot.first += *s.turns[k].value;
      ++slot.second;
    }
    if (speakers.size() != 2 || acc[0].size() != 2 || acc[1].size() != 2) {
      out.diagnostics.push_back(s.conversation_id +
                                ": a speaker has no values in one half");
      continue;
    }
    auto gap = [](const auto& m) {
      const auto& a = m.begin()->second;
      const auto& b = std::next(m.begin())->second;
      return std::abs(a.first / static_cast<double>(a.second) -
                      b.first / static_cast<double>(b.second));
    };
    out.gaps.push_back({s.conversation_id, gap(acc[0]), gap(acc[1])});
  }
  std::vector<double> first;
  std::vector<double> second;
  for (const auto& g : out.gaps) {
    first.push_back(g.first);
    second.push_back(g.second);
  }
  out.corpus =
      from_paired(Measure::kConvConv, second, first, alpha, "CONVERGENCE");
  return out;
}

std::array<FeatureSeries, 3> split_thirds(const FeatureSeries& s) {
  std::array<FeatureSeries, 3> out;
  const std::size_t n = s.turns.size();
  for (std::size_t b = 0; b < 3; ++b) {
    out[b].conversation_id = s.conversation_id;
    out[b].feature = s.feature;
    const std::size_t lo = b * n / 3;
    const std::size_t hi = (b + 1) * n / 3;
    out[b].turns.assign(s.turns.begin() + static_cast<std::ptrdiff_t>(lo),
                        s.turns.begin() + static_cast<std::ptrdiff_t>(hi));
  }
  return out;
}

std::array<ThirdResults, 3> thirds_analysis(const FeatureSeries& s,
                                            std::uint64_t seed,
                                            SyncDirection dir,
                                            const ProximityOptions& opts) {
  std::array<ThirdResults, 3> out;
  const auto parts = split_thirds(s);
  for (std::size_t b = 0; b < 3; ++b) {
    if (parts[b].turns.size() < 3) {
      const std::string note = "third has fewer than 3 turns";
      out[b].proximity = not_evaluable(Measure::kTurnProx, note);
      out[b].proximity.seed = seed;
      out[b].convergence = not_evaluable(Measure::kTurnConv, note);
      out[b].synchrony = not_evaluable(Measure::kTurnSync, note);
      continue;
    }
    out[b].proximity = turn_proximity(parts[b], seed, opts);
    out[b].convergence = turn_convergence(parts[b], opts.alpha);
    out[b].synchrony = turn_synchrony(parts[b], dir, opts.alpha);
  }
  return out;
}

MeasureResult summarize_r(Measure m, const std::vector<double>& per_conv,
                          double alpha) {
  MeasureResult r;
  r.measure = m;
  try {
    const StatResult t = one_sample_ttest(per_conv, 0.0);
    r.status = Status::kOk;
    r.statistic = t.statistic;
    r.p = t.p;
    r.n = t.n;
    if (r.p >= alpha) {
      r.label = "NOT_SIGNIFICANT";
    } else if (t.statistic > 0.0) {
      r.detected = true;
      r.label = "POSITIVE";
    } else {
      r.label = "NEGATIVE";
    }
  } catch (const DegenerateError& e) {
    return not_evaluable(m, e.what(), per_conv.size());
  }
  return r;
}

MeasureResult summarize_proximity(const ProximityPairs& pooled, double alpha) {
  return from_paired(Measure::kTurnProx, pooled.partner, pooled.other, alpha,
                     "PROXIMITY");
}

}  // namespace entrain
