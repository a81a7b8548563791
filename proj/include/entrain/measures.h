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

#ifndef ENTRAIN_MEASURES_H_
#define ENTRAIN_MEASURES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entrain/stats.h"

namespace entrain {

struct TurnValue {
  std::size_t turn_index = 0;
  std::string speaker_id;
  std::optional<double> value;
};

// One feature over the turns of one conversation. Consecutive entries are
// consecutive turns, so adjacent entries always have different speakers.
struct FeatureSeries {
  std::string conversation_id;
  std::string feature;
  std::vector<TurnValue> turns;

  // Throws ContractViolation if turn indices do not increase or adjacent
  // speakers repeat.
  void validate() const;
};

enum class Measure { kTurnProx, kTurnConv, kTurnSync, kConvProx, kConvConv };
std::string_view measure_name(Measure m);  // "TURN_PROX", ...

enum class Status { kOk, kNotEvaluable, kSkipped, kFailed };
std::string_view status_name(Status s);  // "OK", "NOT_EVALUABLE", ...

struct MeasureResult {
  Measure measure = Measure::kTurnProx;
  Status status = Status::kNotEvaluable;
  // t for the t-based measures; the convergence score c = -r for
  // TURN_CONV; r for TURN_SYNC.
  double statistic = 0.0;
  std::optional<double> raw_r;  // pearson r before sign normalization
  double p = 1.0;
  std::size_t n = 0;
  // Significant at alpha in the entraining direction.
  bool detected = false;
  std::string label = "NOT_SIGNIFICANT";
  std::uint64_t seed = 0;
  std::string note;
};

struct ProximityOptions {
  std::size_t other_sample = 10;
  std::size_t min_turns = 12;
  double alpha = kDefaultAlpha;
};

// Per-target differences behind a turn-level proximity test, kept so the
// corpus-level test can pool targets across conversations.
struct ProximityPairs {
  std::vector<double> partner;
  std::vector<double> other;
};

// Partner difference against the preceding turn, other difference as the
// mean over up to `other_sample` partner turns that are not adjacent to the
// target, drawn without replacement. Paired t over targets.
MeasureResult turn_proximity(const FeatureSeries& s, std::uint64_t seed,
                             const ProximityOptions& opts = {},
                             ProximityPairs* pairs = nullptr);

// c = -r(|v_k - v_{k-1}|, k). Positive c means shrinking differences.
MeasureResult turn_convergence(const FeatureSeries& s,
                               double alpha = kDefaultAlpha);

enum class SyncDirection {
  kFirstLeads,   // pairs (first speaker's turn, the reply to it)
  kSecondLeads,  // pairs (second speaker's turn, the reply to it)
  kBoth,         // every adjacent pair
};

MeasureResult turn_synchrony(const FeatureSeries& s,
                             SyncDirection dir = SyncDirection::kFirstLeads,
                             double alpha = kDefaultAlpha);

struct SpeakerMean {
  std::string conversation_id;
  std::string speaker_id;
  double value = 0.0;
};

struct ConvProximityResult {
  MeasureResult corpus;
  // Rank of the two partner differences among the differences to every
  // speaker of another conversation; statistic is the mean of partner minus
  // other difference.
  std::map<std::string, MeasureResult> per_conversation;
};

// Speakers without a partner in `means` are ignored.
ConvProximityResult conv_proximity(const std::vector<SpeakerMean>& means,
                                   double alpha = kDefaultAlpha);

struct HalfGaps {
  std::string conversation_id;
  double first = 0.0;   // |mean_A - mean_B| in the first half of the turns
  double second = 0.0;
};

struct ConvConvergenceResult {
  MeasureResult corpus;
  std::vector<HalfGaps> gaps;
  std::vector<std::string> diagnostics;  // excluded conversations
};

// Paired t of second-half against first-half gaps across conversations.
ConvConvergenceResult conv_convergence(const std::vector<FeatureSeries>& s,
                                       double alpha = kDefaultAlpha);

// Contiguous thirds: block k holds turns [k n / 3, (k + 1) n / 3).
std::array<FeatureSeries, 3> split_thirds(const FeatureSeries& s);

struct ThirdResults {
  MeasureResult proximity;
  MeasureResult convergence;
  MeasureResult synchrony;
};

std::array<ThirdResults, 3> thirds_analysis(
    const FeatureSeries& s, std::uint64_t seed,
    SyncDirection dir = SyncDirection::kFirstLeads,
    const ProximityOptions& opts = {});

// Corpus-level summary of per-conversation turn-level r values: one-sample
// t against zero.
MeasureResult summarize_r(Measure m, const std::vector<double>& per_conv,
                          double alpha = kDefaultAlpha);

// Corpus-level turn proximity over targets pooled from all conversations.
MeasureResult summarize_proximity(const ProximityPairs& pooled,
                                  double alpha = kDefaultAlpha);

}  // namespace entrain

#endif  // ENTRAIN_MEASURES_H_
