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

#ifndef ENTRAIN_PIPELINE_H_
#define ENTRAIN_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entrain/corpus.h"
#include "entrain/csw.h"
#include "entrain/feature_dump.h"
#include "entrain/measures.h"
#include "entrain/prosody.h"

namespace entrain {

struct RunConfig {
  std::filesystem::path corpus_dir;
  std::optional<std::filesystem::path> cues_path;     // default: built-in
  std::optional<std::filesystem::path> fillers_path;  // default: built-in
  std::optional<std::filesystem::path> overrides_path;
  // Per-utterance prosody dump; when absent, prosody comes from the audio
  // referenced by the corpus (if use_audio) or is skipped.
  std::optional<std::filesystem::path> features_path;
  bool use_audio = true;
  bool lexical = true;
  bool csw = true;
  bool prosody = true;
  bool thirds = true;
  double alpha = kDefaultAlpha;
  std::uint64_t seed = 0;
  std::size_t other_sample = 10;
  SyncDirection sync_direction = SyncDirection::kBoth;
  std::filesystem::path output_dir = "entrain_out";
  std::vector<std::string> formats = {"csv", "jsonl", "md"};

  // Throws ContractViolation for alpha outside (0, 1) or unknown formats.
  void validate() const;
};

std::optional<SyncDirection> parse_sync_direction(std::string_view s);
std::string_view sync_direction_name(SyncDirection d);

// One (conversation, feature, measure, scope) cell. Corpus-level cells use
// conversation "*".
struct ResultRow {
  std::string conversation;
  std::string feature;
  std::string measure;
  std::string scope;  // turn, conversation, corpus, third1..third3
  std::optional<double> statistic;
  std::optional<double> p;
  std::size_t n = 0;
  std::string label;
  std::optional<std::uint64_t> seed;
  std::string status;
  std::string note;
};

// Corpus-level line of a summary table.
struct SummaryRow {
  std::string feature;
  std::string measure;
  std::string scope;
  std::size_t evaluated = 0;  // conversations with a verdict
  std::size_t detected = 0;
  std::size_t total = 0;      // conversations in the analysis
  std::optional<double> pct_detected;  // detected / total * 100
  std::optional<double> statistic;
  std::optional<double> p;
  std::size_t n = 0;
  std::string status;
  std::string note;
};

struct GenderRow {
  std::string feature;
  std::string measure;
  std::size_t same_detected = 0;
  std::size_t same_total = 0;
  std::size_t mixed_detected = 0;
  std::size_t mixed_total = 0;
  std::size_t excluded = 0;  // conversations with an unspecified gender
  std::optional<double> same_pct;   // N/A when the group is empty
  std::optional<double> mixed_pct;
};

struct ManifestEntry {
  std::string conversation;  // "*" for corpus-wide problems
  std::string stage;
  std::string status;  // FAILED or SKIPPED
  std::string message;
};

struct SnrSummary {
  std::vector<std::pair<std::string, double>> per_conversation;
  std::optional<double> mean;
  std::optional<double> median;
  std::size_t above_threshold = 0;
  double threshold_db = kCleanSpeechSnrDb;
  double reference_db = 54.3;
};

struct ResultBundle {
  std::uint64_t seed = 0;
  double alpha = kDefaultAlpha;
  std::size_t conversations_read = 0;
  std::size_t conversations_analyzed = 0;
  std::vector<ResultRow> results;
  std::vector<SummaryRow> summaries;
  std::vector<GenderRow> gender;
  std::optional<CswStats> csw_stats;
  std::optional<SnrSummary> snr;
  std::vector<ManifestEntry> manifest;
  std::vector<std::string> diagnostics;

  bool has_failures() const;
};

// Weighted percentage per gender group: detected / group size * 50, so
// each group contributes at most 50. Conversations with an unspecified
// gender are counted as excluded.
GenderRow gender_weighted_pct(
    const std::string& feature, const std::string& measure,
    const std::map<std::string, bool>& verdicts,
    const std::map<std::string, std::pair<Gender, Gender>>& genders);

// Turn values for the CSW features: presence (max over the turn's
// utterances), ratio (non-matrix words / words in the turn), and one 0/1
// series per strategy.
std::vector<FeatureSeries> csw_series(const Conversation& conv,
                                      const std::vector<Turn>& turns,
                                      const std::vector<CswFeatures>& utt);

inline const std::vector<std::string>& csw_feature_keys() {
  static const std::vector<std::string> k = {"csw_presence", "csw_ratio",
                                             "csw_I", "csw_A", "csw_O"};
  return k;
}
std::string csw_feature_label(const std::string& key);

// Duration-weighted mean of the utterance values of each turn, per
// prosody feature. `utt` is indexed like conv.utterances.
std::vector<FeatureSeries> prosody_series(
    const Conversation& conv, const std::vector<Turn>& turns,
    const std::vector<ProsodyVector>& utt);

// Per-speaker mean of the turn values, for conversation-level proximity.
std::vector<SpeakerMean> speaker_means(const FeatureSeries& s);

// Prosody per utterance from the corpus audio. Utterances whose span cannot
// be analyzed get an empty vector and a diagnostic.
std::vector<ProsodyVector> audio_prosody(const Conversation& conv,
                                         std::vector<std::string>& diagnostics);

ResultBundle run_pipeline(const RunConfig& config);

// Measures over already-loaded data; run_pipeline reads the inputs and
// calls this.
ResultBundle analyze(const Corpus& corpus, const RunConfig& config,
                     const std::optional<FeatureTable>& features);

}  // namespace entrain

#endif  // ENTRAIN_PIPELINE_H_
