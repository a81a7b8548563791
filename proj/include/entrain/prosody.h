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

#ifndef ENTRAIN_PROSODY_H_
#define ENTRAIN_PROSODY_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entrain/corpus.h"
#include "entrain/wav.h"

namespace entrain {

enum class ProsodyFeature {
  kPitchMin,
  kPitchMean,
  kPitchMax,
  kPitchSd,
  kIntensityMin,
  kIntensityMean,
  kIntensityMax,
  kIntensitySd,
  kJitter,
  kShimmer,
  kHnr,
  kSpeakingRate,
};
inline constexpr std::size_t kProsodyFeatureCount = 12;

const std::array<ProsodyFeature, kProsodyFeatureCount>& all_prosody_features();
std::string_view feature_key(ProsodyFeature f);    // "pitch_min"
std::string_view feature_label(ProsodyFeature f);  // "Min. pitch"
std::optional<ProsodyFeature> parse_prosody_feature(std::string_view key);

// Twelve per-utterance features; any of them may be missing.
struct ProsodyVector {
  std::array<std::optional<double>, kProsodyFeatureCount> values;

  std::optional<double>& operator[](ProsodyFeature f) {
    return values[static_cast<std::size_t>(f)];
  }
  const std::optional<double>& operator[](ProsodyFeature f) const {
    return values[static_cast<std::size_t>(f)];
  }
  bool operator==(const ProsodyVector&) const = default;
};

struct PitchOptions {
  double floor = 75.0;     // Hz
  double ceiling = 600.0;  // Hz
  double step = 0.010;     // s
  double voicing_threshold = 0.45;
  // Frames whose local peak is below this fraction of the global peak are
  // unvoiced.
  double silence_threshold = 0.03;
  // Per-octave bonus for shorter lags; keeps pure tones off subharmonics.
  double octave_cost = 0.01;
};

struct PitchFrame {
  double time = 0.0;      // frame centre, s
  double f0 = 0.0;        // Hz; 0 when unvoiced
  double strength = 0.0;  // normalized autocorrelation at the chosen lag

  bool voiced() const { return f0 > 0.0; }
};

struct PitchTrack {
  std::vector<PitchFrame> frames;
  PitchOptions options;
};

// Short-term autocorrelation pitch tracking with a Hann window of 3/floor
// seconds, window-autocorrelation correction and parabolic peak refinement.
// Throws Error("too short for pitch floor") if the signal is shorter than
// one window.
PitchTrack extract_pitch(const AudioSignal& sig, const PitchOptions& opts = {});

struct IntensityOptions {
  double step = 0.010;    // s
  double window = 0.032;  // s
};

// Intensity contour in dB relative to a mean square of 1e-10 full scale.
// Silent frames sit at 0 dB.
std::vector<double> extract_intensity(const AudioSignal& sig,
                                      const IntensityOptions& opts = {});

inline constexpr double kIntensityReference = 1e-10;

struct VoiceQuality {
  std::optional<double> jitter;   // local, ratio
  std::optional<double> shimmer;  // local, ratio
  std::optional<double> hnr;      // dB
};

VoiceQuality jitter_shimmer_hnr(const AudioSignal& sig,
                                const PitchTrack& pitch);

// Orthographic syllable estimate: vowel-letter groups per word, minimum one.
// A word-final 'y' is a vowel in English (`english` = true) words.
int count_syllables(std::string_view word, bool english);

// Syllables per second over the utterance span. l2 tokens are read as
// English.
double speaking_rate(const Utterance& utt);

// All twelve features for the utterance span of `sig` (the speaker's
// channel). Throws Error when the span lies outside the audio.
ProsodyVector utterance_prosody(const AudioSignal& sig, const Utterance& utt,
                                const PitchOptions& opts = {});

struct ZScoreResult {
  std::map<std::string, std::vector<ProsodyVector>> normalized;
  std::vector<std::string> diagnostics;
};

// Per speaker and field, (x - mean) / sd with the sample standard deviation
// of that speaker's values. Fields with fewer than two values or zero
// variance become missing.
ZScoreResult zscore_by_speaker(
    const std::map<std::string, std::vector<ProsodyVector>>& by_speaker);

// Energy-split SNR in dB: the loudest 40% of 20 ms frames are taken as
// speech, the quietest 20% as noise. Needs at least one second of audio.
double estimate_snr(const AudioSignal& sig);

inline constexpr double kCleanSpeechSnrDb = 30.0;

}  // namespace entrain

#endif  // ENTRAIN_PROSODY_H_
