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

#include "entrain/prosody.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>

#include <boost/math/tools/minima.hpp>
#include <fftw3.h>

#include "entrain/error.h"
#include "entrain/text.h"

namespace entrain {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr std::array<ProsodyFeature, kProsodyFeatureCount> kAllFeatures = {
    ProsodyFeature::kPitchMin,      ProsodyFeature::kPitchMean,
    ProsodyFeature::kPitchMax,      ProsodyFeature::kPitchSd,
    ProsodyFeature::kIntensityMin,  ProsodyFeature::kIntensityMean,
    ProsodyFeature::kIntensityMax,  ProsodyFeature::kIntensitySd,
    ProsodyFeature::kJitter,        ProsodyFeature::kShimmer,
    ProsodyFeature::kHnr,           ProsodyFeature::kSpeakingRate,
};

constexpr std::array<std::string_view, kProsodyFeatureCount> kKeys = {
    "pitch_min",     "pitch_mean",     "pitch_max",     "pitch_sd",
    "intensity_min", "intensity_mean", "intensity_max", "intensity_sd",
    "jitter",        "shimmer",        "hnr",           "speaking_rate",
};

constexpr std::array<std::string_view, kProsodyFeatureCount> kLabels = {
    "Min. pitch",     "Mean pitch",     "Max. pitch",     "SD pitch",
    "Min. intensity", "Mean intensity", "Max. intensity", "SD intensity",
    "Jitter",         "Shimmer",        "HNR",            "Speaking rate",
};

// Autocorrelation r[0..max_lag] of inputs up to `length` samples, via a
// zero-padded real FFT. Plans once and reuses the buffers.
class Autocorrelator {
 public:
  Autocorrelator(std::size_t length, std::size_t max_lag) : max_lag_(max_lag) {
    while (n_ < length + max_lag + 1) n_ <<= 1;
    buf_ = fftw_alloc_real(n_);
    spec_ = fftw_alloc_complex(n_ / 2 + 1);
    std::lock_guard lock(fftw_planner_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(n_), buf_, spec_,
                                FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_1d(static_cast<int>(n_), spec_, buf_,
                                FFTW_ESTIMATE);
  }
  ~Autocorrelator() {
    {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(fwd_);
      fftw_destroy_plan(inv_);
    }
    fftw_free(spec_);
    fftw_free(buf_);
  }
  Autocorrelator(const Autocorrelator&) = delete;
  Autocorrelator& operator=(const Autocorrelator&) = delete;

  std::vector<double> operator()(const std::vector<double>& x) {
    std::fill(buf_, buf_ + n_, 0.0);
    std::copy(x.begin(), x.end(), buf_);
    fftw_execute(fwd_);
    for (std::size_t k = 0; k < n_ / 2 + 1; ++k) {
      spec_[k][0] = spec_[k][0] * spec_[k][0] + spec_[k][1] * spec_[k][1];
      spec_[k][1] = 0.0;
    }
    fftw_execute(inv_);
    std::vector<double> r(max_lag_ + 1);
    for (std::size_t i = 0; i <= max_lag_; ++i)
      r[i] = buf_[i] / static_cast<double>(n_);
    return r;
  }

 private:
  std::size_t n_ = 1;
  std::size_t max_lag_;
  double* buf_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan inv_ = nullptr;
};

std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                (static_cast<double>(i) + 0.5) /
                                static_cast<double>(n));
  }
  return w;
}

// Vertex of the parabola through (-1, a), (0, b), (1, c).
std::pair<double, double> parabolic_peak(double a, double b, double c) {
  const double denom = a - 2.0 * b + c;
  if (denom >= 0.0) return {0.0, b};
  const double delta = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  return {delta, b - 0.25 * (a - c) * delta};
}

// Hann-windowed sinc interpolation of x at fractional index t.
double sinc_at(const std::vector<double>& x, double t, long half_width) {
  const auto n = static_cast<long>(x.size());
  const long c = static_cast<long>(std::floor(t));
  double acc = 0.0;
  for (long i = c - half_width + 1; i <= c + half_width; ++i) {
    if (i < 0 || i >= n) continue;
    const double d = t - static_cast<double>(i);
    const double w = 0.5 + 0.5 * std::cos(std::numbers::pi * d / static_cast<double>(half_width));
    const double s = d == 0.0 ? 1.0 : std::sin(std::numbers::pi * d) / (std::numbers::pi * d);
    acc += x[static_cast<std::size_t>(i)] * s * w;
  }
  return acc;
}

// Offset and height of the band-limited maximum near sample p.
std::pair<double, double> sinc_peak(const std::vector<double>& x, long p) {
  constexpr long kHalfWidth = 40;
  const double at = static_cast<double>(p);
  auto [t, neg] = boost::math::tools::brent_find_minima(
      [&](double u) { return -sinc_at(x, u, kHalfWidth); }, at - 1.0, at + 1.0, 40);
  return {t - at, -neg};
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

const std::array<ProsodyFeature, kProsodyFeatureCount>& all_prosody_features() {
  return kAllFeatures;
}

std::string_view feature_key(ProsodyFeature f) {
  return kKeys[static_cast<std::size_t>(f)];
}

std::string_view feature_label(ProsodyFeature f) {
  return kLabels[static_cast<std::size_t>(f)];
}

std::optional<ProsodyFeature> parse_prosody_feature(std::string_view key) {
  for (std::size_t i = 0; i < kProsodyFeatureCount; ++i) {
    if (kKeys[i] == key) return kAllFeatures[i];
  }
  return std::nullopt;
}

PitchTrack extract_pitch(const AudioSignal& sig, const PitchOptions& opts) {
  if (!(opts.floor > 0.0 && opts.floor < opts.ceiling &&
        opts.ceiling < sig.sample_rate / 2.0))
    throw ContractViolation("extract_pitch: need 0 < floor < ceiling < fs/2");
  if (!(opts.step > 0.0))
    throw ContractViolation("extract_pitch: step must be positive");
  const double sr = sig.sample_rate;
  const auto window =
      static_cast<std::size_t>(std::llround(3.0 / opts.floor * sr));
  if (sig.samples.size() < window) throw Error("too short for pitch floor");

  const auto min_lag =
      std::max<std::size_t>(2, static_cast<std::size_t>(sr / opts.ceiling));
  const auto max_lag = std::min<std::size_t>(
      window / 2, static_cast<std::size_t>(std::ceil(sr / opts.floor)) + 1);

  const std::vector<double> w = hann(window);
  Autocorrelator autocorrelation(window, max_lag + 1);
  std::vector<double> rw = autocorrelation(w);
  const double rw0 = rw[0];
  for (auto& v : rw) v /= rw0;

  double global_peak = 0.0;
  for (double x : sig.samples) global_peak = std::max(global_peak, std::abs(x));

  PitchTrack track;
  track.options = opts;
  std::vector<double> frame(window);
  for (std::size_t i = 0;; ++i) {
    const auto start = static_cast<std::size_t>(
        std::floor(static_cast<double>(i) * opts.step * sr + 0.5));
    if (start + window > sig.samples.size()) break;
    PitchFrame pf;
    pf.time = (static_cast<double>(start) + 0.5 * static_cast<double>(window)) /
              sr;

    double mean = 0.0;
    for (std::size_t k = 0; k < window; ++k) mean += sig.samples[start + k];
    mean /= static_cast<double>(window);
    double local_peak = 0.0;
    for (std::size_t k = 0; k < window; ++k) {
      const double x = sig.samples[start + k] - mean;
      local_peak = std::max(local_peak, std::abs(x));
      frame[k] = x * w[k];
    }
    if (global_peak <= 0.0 ||
        local_peak < opts.silence_threshold * global_peak) {
      track.frames.push_back(pf);
      continue;
    }

    const std::vector<double> r = autocorrelation(frame);
    if (r[0] <= 0.0) {
      track.frames.push_back(pf);
      continue;
    }
    auto norm = [&](std::size_t lag) { return r[lag] / r[0] / rw[lag]; };

    double best_score = -1e300;
    double best_lag = 0.0;
    double best_strength = 0.0;
    for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
      const double prev = norm(lag - 1);
      const double cur = norm(lag);
      const double next = norm(lag + 1);
      if (!(cur > prev && cur >= next)) continue;
      auto [delta, value] = parabolic_peak(prev, cur, next);
      const double true_lag = static_cast<double>(lag) + delta;
      const double f0 = sr / true_lag;
      if (f0 < opts.floor || f0 > opts.ceiling) continue;
      double strength = value > 1.0 ? 1.0 / value : value;
      const double score =
          strength - opts.octave_cost * std::log2(opts.floor / f0);
      if (score > best_score) {
        best_score = score;
        best_lag = true_lag;
        best_strength = strength;
      }
    }
    if (best_lag > 0.0 && best_strength >= opts.voicing_threshold) {
      pf.f0 = sr / best_lag;
      pf.strength = best_strength;
    }
    track.frames.push_back(pf);
  }
  return track;
}

std::vector<double> extract_intensity(const AudioSignal& sig,
                                      const IntensityOptions& opts) {
  if (sig.samples.empty()) throw Error("extract_intensity: empty signal");
  if (!(opts.step > 0.0) || opts.window < opts.step)
    throw ContractViolation("extract_intensity: need window >= step > 0");
  const double sr = sig.sample_rate;
  const std::size_t window = std::min(
      sig.samples.size(),
      std::max<std::size_t>(1, static_cast<std::size_t>(
                                   std::llround(opts.window * sr))));
  const std::vector<double> w = hann(window);
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const auto start = static_cast<std::size_t>(
        std::floor(static_cast<double>(i) * opts.step * sr + 0.5));
    if (start + window > sig.samples.size()) break;
    double acc = 0.0;
    for (std::size_t k = 0; k < window; ++k) {
      const double x = sig.samples[start + k];
      acc += w[k] * x * x;
    }
    const double ms = std::max(acc / wsum, kIntensityReference);
    out.push_back(10.0 * std::log10(ms / kIntensityReference));
  }
  return out;
}

VoiceQuality jitter_shimmer_hnr(const AudioSignal& sig,
                                const PitchTrack& pitch) {
  VoiceQuality vq;
  const double sr = sig.sample_rate;
  const auto& frames = pitch.frames;
  const auto& opts = pitch.options;
  const auto n = static_cast<long>(sig.samples.size());
  const double half_step = 0.5 * opts.step;

  double strength_sum = 0.0;
  std::size_t voiced = 0;
  for (const auto& f : frames) {
    if (!f.voiced()) continue;
    strength_sum += f.strength;
    ++voiced;
  }
  if (voiced == 0) return vq;
  const double r = std::clamp(strength_sum / static_cast<double>(voiced),
                              1e-10, 1.0 - 1e-10);
  vq.hnr = 10.0 * std::log10(r / (1.0 - r));

  // Walk the waveform peak to peak through each voiced run.
  std::vector<double> period_diffs;
  std::vector<double> periods;
  std::vector<double> amp_diffs;
  std::vector<double> amps;
  auto peak_in = [&](long lo, long hi) {
    lo = std::max(lo, 1L);
    hi = std::min(hi, n - 2);
    long best = -1;
    for (long i = lo; i <= hi; ++i) {
      if (best < 0 || sig.samples[static_cast<std::size_t>(i)] >
                          sig.samples[static_cast<std::size_t>(best)])
        best = i;
    }
    return best;
  };

  std::size_t i = 0;
  while (i < frames.size()) {
    if (!frames[i].voiced()) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < frames.size() && frames[j + 1].voiced()) ++j;
    const double run_begin = frames[i].time - half_step;
    const double run_end = frames[j].time + half_step;
    auto f0_at = [&](double t) {
      std::size_t k = i;
      while (k < j && frames[k + 1].time <= t) ++k;
      if (k < j && t - frames[k].time > frames[k + 1].time - t) ++k;
      return frames[k].f0;
    };

    double prev_t = -1.0;
    double prev_a = 0.0;
    double prev_period = -1.0;
    long lo = static_cast<long>(run_begin * sr);
    long hi = lo + static_cast<long>(sr / f0_at(run_begin));
    while (true) {
      const long p = peak_in(lo, hi);
      if (p < 0) break;
      auto [delta, amp] = sinc_peak(sig.samples, p);
      const double t = (static_cast<double>(p) + delta) / sr;
      if (t > run_end) break;
      if (prev_t >= 0.0) {
        const double period = t - prev_t;
        const bool plausible = period >= 1.0 / opts.ceiling &&
                               period <= 1.0 / opts.floor;
        if (plausible) {
          periods.push_back(period);
          amps.push_back(amp);
          if (prev_period > 0.0) {
            period_diffs.push_back(std::abs(period - prev_period));
            amp_diffs.push_back(std::abs(amp - prev_a));
          }
          prev_period = period;
        } else {
          prev_period = -1.0;
        }
      } else {
        amps.push_back(amp);
      }
      prev_t = t;
      prev_a = amp;
      const double expected = sr / f0_at(t);
      lo = static_cast<long>(std::floor((t * sr) + 0.8 * expected));
      hi = static_cast<long>(std::ceil((t * sr) + 1.2 * expected));
      if (lo >= n - 1) break;
    }
    i = j + 1;
  }

  if (periods.size() >= 3 && !period_diffs.empty()) {
    vq.jitter = mean_of(period_diffs) / mean_of(periods);
    vq.shimmer = mean_of(amp_diffs) / std::abs(mean_of(amps));
  }
  return vq;
}

int count_syllables(std::string_view word, bool english) {
  const std::u32string cps = decode_utf8(fold_case(word));
  auto is_vowel = [](char32_t c) {
    switch (c) {
      case U'a': case U'e': case U'i': case U'o': case U'u':
      case U'á': case U'é': case U'í': case U'ó':
      case U'ú': case U'ü':
        return true;
      default:
        return false;
    }
  };
  // Position of the last letter, for the word-final 'y' rule.
  std::size_t last = cps.size();
  for (std::size_t k = cps.size(); k-- > 0;) {
    if (is_letter(cps[k])) {
      last = k;
      break;
    }
  }
  int groups = 0;
  bool in_group = false;
  for (std::size_t k = 0; k < cps.size(); ++k) {
    const bool v = is_vowel(cps[k]) || (english && k == last && cps[k] == U'y');
    if (v && !in_group) ++groups;
    in_group = v;
  }
  return std::max(groups, 1);
}

double speaking_rate(const Utterance& utt) {
  int syllables = 0;
  for (const auto& t : utt.tokens)
    syllables += count_syllables(t.surface, t.lang == Lang::kL2);
  return static_cast<double>(syllables) / utt.duration();
}

ProsodyVector utterance_prosody(const AudioSignal& sig, const Utterance& utt,
                                const PitchOptions& opts) {
  const double tolerance = 1.0 / sig.sample_rate;
  if (utt.start < 0.0 || utt.end > sig.duration() + tolerance)
    throw Error("utterance span outside audio");
  const AudioSignal span = sig.slice(utt.start, utt.end);
  if (span.samples.empty()) throw Error("utterance span outside audio");

  ProsodyVector pv;
  pv[ProsodyFeature::kSpeakingRate] = speaking_rate(utt);

  const std::vector<double> intensity = extract_intensity(span);
  if (!intensity.empty()) {
    auto [lo, hi] = std::minmax_element(intensity.begin(), intensity.end());
    pv[ProsodyFeature::kIntensityMin] = *lo;
    pv[ProsodyFeature::kIntensityMax] = *hi;
    pv[ProsodyFeature::kIntensityMean] = mean_of(intensity);
    if (intensity.size() >= 2)
      pv[ProsodyFeature::kIntensitySd] = sample_sd(intensity);
  }

  if (span.duration() < 3.0 / opts.floor) return pv;
  const PitchTrack track = extract_pitch(span, opts);
  std::vector<double> f0;
  for (const auto& f : track.frames) {
    if (f.voiced()) f0.push_back(f.f0);
  }
  if (!f0.empty()) {
    auto [lo, hi] = std::minmax_element(f0.begin(), f0.end());
    pv[ProsodyFeature::kPitchMin] = *lo;
    pv[ProsodyFeature::kPitchMax] = *hi;
    pv[ProsodyFeature::kPitchMean] = mean_of(f0);
    if (f0.size() >= 2) pv[ProsodyFeature::kPitchSd] = sample_sd(f0);
  }
  const VoiceQuality vq = jitter_shimmer_hnr(span, track);
  pv[ProsodyFeature::kJitter] = vq.jitter;
  pv[ProsodyFeature::kShimmer] = vq.shimmer;
  pv[ProsodyFeature::kHnr] = vq.hnr;
  return pv;
}

ZScoreResult zscore_by_speaker(
    const std::map<std::string, std::vector<ProsodyVector>>& by_speaker) {
  ZScoreResult result;
  for (const auto& [speaker, vectors] : by_speaker) {
    auto& out = result.normalized[speaker];
    out.assign(vectors.size(), ProsodyVector{});
    for (auto f : kAllFeatures) {
      std::vector<double> xs;
      for (const auto& v : vectors) {
        if (v[f]) xs.push_back(*v[f]);
      }
      if (xs.size() < 2) continue;
      auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
      if (*lo == *hi) {
        result.diagnostics.push_back("speaker " + speaker + ": " +
                                     std::string(feature_key(f)) +
                                     " has zero variance; left missing");
        continue;
      }
      const double m = mean_of(xs);
      const double sd = sample_sd(xs);
      for (std::size_t k = 0; k < vectors.size(); ++k) {
        if (vectors[k][f]) out[k][f] = (*vectors[k][f] - m) / sd;
      }
    }
  }
  return result;
}

double estimate_snr(const AudioSignal& sig) {
  if (sig.duration() < 1.0) throw Error("estimate_snr: need at least 1 s");
  const auto frame =
      static_cast<std::size_t>(std::llround(0.020 * sig.sample_rate));
  std::vector<double> energy;
  for (std::size_t b = 0; b + frame <= sig.samples.size(); b += frame) {
    double acc = 0.0;
    for (std::size_t k = b; k < b + frame; ++k)
      acc += sig.samples[k] * sig.samples[k];
    energy.push_back(acc / static_cast<double>(frame));
  }
  std::sort(energy.begin(), energy.end());
  if (energy.back() <= 0.0) throw Error("estimate_snr: signal is silent");
  const std::size_t n = energy.size();
  const std::size_t noise_count = std::max<std::size_t>(1, n / 5);
  const std::size_t speech_from =
      std::min(n - 1, static_cast<std::size_t>(std::ceil(0.6 * n)));
  double noise = 0.0;
  for (std::size_t k = 0; k < noise_count; ++k) noise += energy[k];
  noise /= static_cast<double>(noise_count);
  double speech = 0.0;
  for (std::size_t k = speech_from; k < n; ++k) speech += energy[k];
  speech /= static_cast<double>(n - speech_from);
  return 10.0 * std::log10(speech / std::max(noise, 1e-20));
}

}  // namespace entrain
