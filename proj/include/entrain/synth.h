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

#ifndef ENTRAIN_SYNTH_H_
#define ENTRAIN_SYNTH_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "entrain/corpus.h"
#include "entrain/feature_dump.h"
#include "entrain/measures.h"

namespace entrain {

enum class Injection { kNone, kProximity, kConvergence, kSynchrony };
std::string_view injection_name(Injection i);  // "NONE", "PROXIMITY", ...
std::optional<Injection> parse_injection(std::string_view name);

// One numeric per-turn feature. Speaker A takes the even turns.
struct FeatureSpec {
  std::string name;
  double mean_a = 0.0;
  double sd_a = 1.0;
  double mean_b = 0.0;
  double sd_b = 1.0;
  Injection injection = Injection::kNone;
  // PROXIMITY: lag-one coupling m in (0, 1) of an AR(1) running across
  //   turns, v_k = m v_{k-1} + (1 - m) mu + sqrt(1 - m^2) sd e.
  // CONVERGENCE: the gap mean_b - mean_a shrinks linearly to gap (1 - m),
  //   m in (0, 1].
  // SYNCHRONY: B's turn = mean_b + m (sd_b / sd_a) (A's previous turn -
  //   mean_a) + sqrt(1 - m^2) sd_b e, m in (0, 1].
  double magnitude = 0.0;
  // Per-conversation random shifts: one shared by both speakers, one per
  // speaker. Non-zero speaker offsets make conversation-level proximity
  // testable.
  double shared_offset_sd = 0.0;
  double speaker_offset_sd = 0.0;
};

struct CswSpec {
  double p_a = 0.0;  // per-turn switch probability
  double p_b = 0.0;
  // Dirichlet concentration over (I, A, O); one mix is drawn per
  // conversation.
  std::array<double, 3> strategy_alpha = {7.2, 1.3, 1.8};
  // Couples each turn's switch probability to the previous turn:
  // p + c (1 - p) after a switch, p (1 - c) otherwise.
  bool entrain = false;
  double coupling = 0.7;
};

struct LexicalSpec {
  // Per conversation, `topic_size` words are drawn from a pool of
  // `topic_pool`; each word position is a topic word with probability
  // `topic_rate`.
  std::size_t topic_pool = 400;
  std::size_t topic_size = 15;
  double topic_rate = 0.0;
};

struct SynthSpec {
  std::size_t turns = 60;
  std::vector<FeatureSpec> features;
  CswSpec csw;
  LexicalSpec lexical;
  Gender gender_a = Gender::kFemale;
  Gender gender_b = Gender::kMale;
  std::uint64_t seed = 0;

  // Throws ContractViolation naming the first infeasible field.
  void validate() const;
};

struct GroundTruth {
  std::map<std::string, std::pair<Injection, double>> injections;
  bool csw_entrain = false;
  std::array<double, 3> strategy_mix = {0, 0, 0};
  std::vector<StrategySet> strategies;  // per utterance, empty = monolingual
};

struct SynthConversation {
  Conversation conversation;  // one utterance per turn
  std::map<std::string, FeatureSeries> series;  // by feature name
  GroundTruth truth;
};

SynthConversation generate(const SynthSpec& spec,
                           const std::string& conversation_id = "synth");

struct SynthCorpus {
  Corpus corpus;
  std::vector<SynthConversation> conversations;

  // Rows for every feature whose name is a prosody feature key.
  std::vector<FeatureRow> feature_rows() const;
};

// `count` conversations "<prefix>000", "<prefix>001", ... each seeded from
// spec.seed and its id.
SynthCorpus generate_corpus(const SynthSpec& spec, std::size_t count,
                            const std::string& prefix = "synth");

struct SweepCell {
  Injection injection = Injection::kNone;
  double magnitude = 0.0;
  Measure measure = Measure::kTurnProx;
  std::size_t trials = 0;
  std::size_t detected = 0;

  double rate() const {
    return trials ? static_cast<double>(detected) / static_cast<double>(trials)
                  : 0.0;
  }
};

struct SweepGrid {
  FeatureSpec feature;  // injection and magnitude are overwritten per cell
  std::vector<Injection> injections;
  std::vector<double> magnitudes;  // 0 runs the null
  std::size_t seeds = 100;
  std::size_t turns = 60;
  std::uint64_t base_seed = 0;
  double alpha = kDefaultAlpha;
  SyncDirection sync_direction = SyncDirection::kFirstLeads;
};

// Detection rate of the three turn-level detectors per (injection,
// magnitude).
std::vector<SweepCell> sweep(const SweepGrid& grid);

}  // namespace entrain

#endif  // ENTRAIN_SYNTH_H_
