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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "entrain/error.h"
#include "entrain/feature_dump.h"
#include "entrain/prosody.h"
#include "entrain/wav.h"
#include "helpers.h"

using namespace entrain;
using namespace entrain::testing;

namespace {

// Harmonic "vowel": identical periods, 1/k amplitude falloff.
AudioSignal vowel(double f0, double seconds, double amp = 0.4,
                  double rate = 16000.0) {
  AudioSignal s;
  s.sample_rate = rate;
  s.samples.resize(static_cast<std::size_t>(seconds * rate));
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    const double t = static_cast<double>(i) / rate;
    double v = 0.0;
    for (int k = 1; k <= 5; ++k)
      v += std::sin(2.0 * std::numbers::pi * k * f0 * t) / k;
    s.samples[i] = amp * v / 1.5;
  }
  return s;
}

AudioSignal concat(const AudioSignal& a, const AudioSignal& b) {
  AudioSignal out = a;
  out.samples.insert(out.samples.end(), b.samples.begin(), b.samples.end());
  return out;
}

void put_u32(std::ofstream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u16(std::ofstream& out, std::uint16_t v) {
  out.put(static_cast<char>(v & 0xff));
  out.put(static_cast<char>(v >> 8));
}

}  // namespace

TEST_CASE("WAV 16-bit full scale and channels") {
  TempDir dir("wav");
  const auto p = dir.path() / "s.wav";
  write_wav(p, {{1.0, -1.0, 0.0, 0.5}, {0.25, 0.25, -0.25, -0.25}}, 8000.0);
  auto left = read_audio(p, 0);
  CHECK(left.sample_rate == 8000.0);
  REQUIRE(left.samples.size() == 4);
  CHECK(left.samples[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(left.samples[1] == doctest::Approx(-1.0).epsilon(1e-4));
  auto right = read_audio(p, 1);
  CHECK(right.samples[2] == doctest::Approx(-0.25).epsilon(1e-3));
  CHECK_THROWS_AS(read_audio(p, 2), AudioError);
}

TEST_CASE("WAV float round trip is exact") {
  TempDir dir("wavf");
  const auto p = dir.path() / "f.wav";
  write_wav(p, {{0.125, -0.5, 0.75}}, 44100.0, WavEncoding::kFloat32);
  auto s = read_audio(p);
  REQUIRE(s.samples.size() == 3);
  CHECK(s.samples[1] == -0.5);
  CHECK(s.duration() == doctest::Approx(3.0 / 44100.0));
}

TEST_CASE("compressed WAV is rejected") {
  TempDir dir("wavc");
  const auto p = dir.path() / "adpcm.wav";
  {
    std::ofstream out(p, std::ios::binary);
    out.write("RIFF", 4);
    put_u32(out, 36 + 4);
    out.write("WAVEfmt ", 8);
    put_u32(out, 16);
    put_u16(out, 2);  // MS ADPCM
    put_u16(out, 1);
    put_u32(out, 8000);
    put_u32(out, 4000);
    put_u16(out, 256);
    put_u16(out, 4);
    out.write("data", 4);
    put_u32(out, 4);
    put_u32(out, 0);
  }
  CHECK_THROWS_AS(read_audio(p), AudioError);
  CHECK_THROWS_AS(read_audio(dir.path() / "missing.wav"), AudioError);
}

TEST_CASE("pitch of pure tones") {
  for (double f : {100.0, 200.0, 400.0}) {
    auto track = extract_pitch(tone(f, 1.0));
    std::size_t voiced = 0;
    for (const auto& fr : track.frames) {
      if (!fr.voiced()) continue;
      ++voiced;
      CHECK(fr.f0 == doctest::Approx(f).epsilon(1.0 / f));
    }
    CHECK(voiced > track.frames.size() * 9 / 10);
  }
}

TEST_CASE("pitch search range is respected") {
  PitchOptions opts;
  opts.floor = 300.0;
  auto track = extract_pitch(tone(200.0, 1.0), opts);
  for (const auto& fr : track.frames) {
    if (fr.voiced()) CHECK(fr.f0 >= 300.0);
  }
  CHECK_THROWS_AS(extract_pitch(tone(200.0, 0.01)), Error);
}

TEST_CASE("white noise is mostly unvoiced") {
  auto track = extract_pitch(noise(1.0, 0.3, 5));
  std::size_t unvoiced = 0;
  for (const auto& fr : track.frames) unvoiced += !fr.voiced();
  CHECK(unvoiced >= track.frames.size() * 9 / 10);
}

TEST_CASE("intensity oracles") {
  AudioSignal square;
  square.sample_rate = 16000.0;
  for (int i = 0; i < 16000; ++i) square.samples.push_back((i / 40) % 2 ? 1.0 : -1.0);
  for (double db : extract_intensity(square)) CHECK(db == doctest::Approx(100.0));

  auto loud = tone(220.0, 0.5, 0.8);
  auto quiet = loud;
  for (auto& x : quiet.samples) x *= 0.5;
  auto a = extract_intensity(loud);
  auto b = extract_intensity(quiet);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i] - b[i] == doctest::Approx(20.0 * std::log10(2.0)));

  AudioSignal silence;
  silence.sample_rate = 16000.0;
  silence.samples.assign(8000, 0.0);
  for (double db : extract_intensity(silence)) CHECK(db == 0.0);
}

TEST_CASE("periodic signals have near-zero jitter and shimmer") {
  for (double f : {160.0, 200.0, 137.0}) {
    auto sig = vowel(f, 0.8);
    auto vq = jitter_shimmer_hnr(sig, extract_pitch(sig));
    REQUIRE(vq.jitter);
    REQUIRE(vq.shimmer);
    CHECK(*vq.jitter < 0.001);
    CHECK(*vq.shimmer < 0.001);
  }
}

TEST_CASE("HNR of a pure tone and of an equal-power mixture") {
  auto clean = tone(200.0, 1.0);
  auto vq = jitter_shimmer_hnr(clean, extract_pitch(clean));
  REQUIRE(vq.hnr);
  CHECK(*vq.hnr > 30.0);

  // Tone power 0.125, noise power 0.125.
  auto mix = tone(200.0, 1.0, 0.5);
  auto n = noise(1.0, std::sqrt(0.125), 99);
  for (std::size_t i = 0; i < mix.samples.size(); ++i) mix.samples[i] += n.samples[i];
  PitchOptions loose;
  loose.voicing_threshold = 0.2;
  auto noisy = jitter_shimmer_hnr(mix, extract_pitch(mix, loose));
  REQUIRE(noisy.hnr);
  CHECK(std::abs(*noisy.hnr) < 1.5);
}

TEST_CASE("syllables and speaking rate") {
  CHECK(count_syllables("hola", false) == 2);
  CHECK(count_syllables("amigo", false) == 3);
  CHECK(count_syllables("okay", true) == 2);
  CHECK(count_syllables("mm", true) == 1);
  CHECK(speaking_rate(utt("A", 0.0, 2.5, "hola:l1 amigo:l1")) == doctest::Approx(2.0));
  CHECK(speaking_rate(utt("A", 0.0, 1.0, "mm:und")) == doctest::Approx(1.0));
  CHECK(speaking_rate(utt("A", 0.0, 0.5, "okay:l2")) == doctest::Approx(4.0));
}

TEST_CASE("utterance prosody on synthetic spans") {
  auto sig = tone(200.0, 1.0);
  auto pv = utterance_prosody(sig, utt("A", 0.0, 1.0, "hola:l1"));
  REQUIRE(pv[ProsodyFeature::kPitchMean]);
  CHECK(*pv[ProsodyFeature::kPitchMin] == doctest::Approx(200.0).epsilon(0.005));
  CHECK(*pv[ProsodyFeature::kPitchMax] == doctest::Approx(200.0).epsilon(0.005));
  CHECK(*pv[ProsodyFeature::kPitchSd] < 0.5);

  AudioSignal silence;
  silence.sample_rate = 16000.0;
  silence.samples.assign(16000, 0.0);
  auto sv = utterance_prosody(silence, utt("A", 0.0, 1.0, "hola:l1"));
  CHECK_FALSE(sv[ProsodyFeature::kPitchMean]);
  CHECK(*sv[ProsodyFeature::kIntensityMean] == 0.0);

  auto two = concat(tone(150.0, 1.0), tone(250.0, 1.0));
  auto tv = utterance_prosody(two, utt("A", 0.0, 2.0, "hola:l1"));
  CHECK(*tv[ProsodyFeature::kPitchMean] == doctest::Approx(200.0).epsilon(0.02));
  CHECK(*tv[ProsodyFeature::kPitchMin] == doctest::Approx(150.0).epsilon(0.01));
  CHECK(*tv[ProsodyFeature::kPitchMax] == doctest::Approx(250.0).epsilon(0.01));

  CHECK_THROWS_AS(utterance_prosody(sig, utt("A", 0.5, 3.0, "x")), Error);
}

TEST_CASE("amplitude scaling moves intensity only") {
  auto sig = vowel(180.0, 1.0, 0.3);
  const auto u = utt("A", 0.0, 1.0, "hola:l1 amigo:l1");
  const auto base = utterance_prosody(sig, u);
  for (double c : {0.25, 0.5, 2.0}) {
    auto scaled = sig;
    for (auto& x : scaled.samples) x *= c;
    const auto pv = utterance_prosody(scaled, u);
    const double shift = 20.0 * std::log10(c);
    for (auto f : all_prosody_features()) {
      REQUIRE(base[f].has_value() == pv[f].has_value());
      if (!base[f]) continue;
      CAPTURE(feature_key(f));
      if (f == ProsodyFeature::kIntensityMin || f == ProsodyFeature::kIntensityMean ||
          f == ProsodyFeature::kIntensityMax) {
        CHECK(std::abs(*pv[f] - *base[f] - shift) < 0.01);
      } else {
        CHECK(*pv[f] == doctest::Approx(*base[f]).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("z-scores per speaker") {
  std::map<std::string, std::vector<ProsodyVector>> in;
  auto pv = [](std::optional<double> pitch, double intensity) {
    ProsodyVector v;
    v[ProsodyFeature::kPitchMean] = pitch;
    v[ProsodyFeature::kIntensityMean] = intensity;
    return v;
  };
  in["A"] = {pv(100.0, 60.0), pv(200.0, 60.0)};
  in["B"] = {pv(1.0, 50.0), pv(std::nullopt, 55.0), pv(3.0, 58.0), pv(8.0, 61.0)};
  auto z = zscore_by_speaker(in);
  // Sample sd of {100, 200} is 70.71, so the z-scores are -/+0.7071.
  CHECK(*z.normalized["A"][0][ProsodyFeature::kPitchMean] == doctest::Approx(-std::sqrt(0.5)));
  CHECK(*z.normalized["A"][1][ProsodyFeature::kPitchMean] == doctest::Approx(std::sqrt(0.5)));
  CHECK_FALSE(z.normalized["A"][0][ProsodyFeature::kIntensityMean]);
  CHECK_FALSE(z.diagnostics.empty());
  CHECK_FALSE(z.normalized["B"][1][ProsodyFeature::kPitchMean]);

  for (auto f : {ProsodyFeature::kPitchMean, ProsodyFeature::kIntensityMean}) {
    std::vector<double> xs;
    for (const auto& v : z.normalized["B"])
      if (v[f]) xs.push_back(*v[f]);
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    CHECK(m == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(std::sqrt(ss / static_cast<double>(xs.size() - 1)) == doctest::Approx(1.0));
  }
}

TEST_CASE("SNR of constructed recordings") {
  // Tone for the first 60% of 2 s, a noise floor 40 dB down throughout.
  const double tone_power = 0.5 * 0.5 * 0.5;
  auto sig = tone(200.0, 2.0, 0.5);
  for (std::size_t i = sig.samples.size() * 6 / 10; i < sig.samples.size(); ++i)
    sig.samples[i] = 0.0;
  auto floor = noise(2.0, std::sqrt(tone_power * 1e-4), 3);
  for (std::size_t i = 0; i < sig.samples.size(); ++i) sig.samples[i] += floor.samples[i];
  CHECK(std::abs(estimate_snr(sig) - 40.0) < 2.0);

  auto mix = tone(200.0, 2.0, 0.5);
  auto n = noise(2.0, std::sqrt(tone_power), 4);
  for (std::size_t i = 0; i < mix.samples.size(); ++i) mix.samples[i] += n.samples[i];
  CHECK(std::abs(estimate_snr(mix)) < 2.0);

  CHECK_THROWS_AS(estimate_snr(tone(200.0, 0.5)), Error);
}

TEST_CASE("feature dump round trip") {
  FeatureRow r;
  r.conversation_id = "c1";
  r.utterance_index = 3;
  r.speaker_id = "A";
  r.values[ProsodyFeature::kPitchMean] = 201.123456789012345;
  r.values[ProsodyFeature::kJitter] = 0.004;
  FeatureRow s = r;
  s.utterance_index = 4;
  s.values = ProsodyVector{};
  std::stringstream buf;
  write_feature_dump(buf, {r, s});
  auto back = read_feature_dump(buf, "dump.csv");
  REQUIRE(back.size() == 2);
  CHECK(back[0].values == r.values);
  CHECK(back[1].values == s.values);
  auto table = index_features(back);
  CHECK(table["c1"].count(4) == 1);

  std::istringstream bad(
      "conversation,utterance_index,speaker,pitch_min\nc1,x,A,1\n");
  try {
    read_feature_dump(bad, "bad.csv");
    FAIL("expected CorpusError");
  } catch (const CorpusError& e) {
    CHECK(e.file() == "bad.csv");
  }
}
