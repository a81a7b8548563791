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

#ifndef ENTRAIN_TESTS_HELPERS_H_
#define ENTRAIN_TESTS_HELPERS_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "entrain/corpus.h"
#include "entrain/rng.h"
#include "entrain/text.h"
#include "entrain/wav.h"

namespace entrain::testing {

// "hola:l1 okay:l2 x:und"; a bare word is l1.
inline std::vector<Token> tokens(std::string_view spec) {
  std::vector<Token> out;
  for (const auto& w : split_whitespace(spec)) {
    Token t;
    auto colon = w.rfind(':');
    if (colon == std::string::npos) {
      t.surface = w;
      t.lang = Lang::kL1;
    } else {
      t.surface = w.substr(0, colon);
      t.lang = *parse_lang(w.substr(colon + 1));
    }
    out.push_back(std::move(t));
  }
  return out;
}

inline Utterance utt(std::string speaker, double start, double end,
                     std::string_view spec) {
  Utterance u;
  u.speaker_id = std::move(speaker);
  u.start = start;
  u.end = end;
  u.tokens = tokens(spec);
  return u;
}

// One second per utterance, speakers as given.
inline Conversation conversation(
    std::string id, const std::vector<std::pair<std::string, std::string>>& lines,
    Gender ga = Gender::kFemale, Gender gb = Gender::kMale) {
  Conversation c;
  c.id = std::move(id);
  c.speakers = {{"A", ga}, {"B", gb}};
  double t = 0.0;
  for (const auto& [spk, text] : lines) {
    c.utterances.push_back(utt(spk, t, t + 1.0, text));
    t += 1.0;
  }
  return c;
}

inline AudioSignal tone(double f0, double seconds, double amp = 0.5,
                        double rate = 16000.0) {
  AudioSignal s;
  s.sample_rate = rate;
  const auto n = static_cast<std::size_t>(seconds * rate);
  s.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    s.samples[i] =
        amp * std::sin(2.0 * std::numbers::pi * f0 * static_cast<double>(i) / rate);
  return s;
}

inline AudioSignal noise(double seconds, double sd, std::uint64_t seed,
                         double rate = 16000.0) {
  AudioSignal s;
  s.sample_rate = rate;
  Rng rng(seed);
  s.samples.resize(static_cast<std::size_t>(seconds * rate));
  for (auto& x : s.samples) x = rng.normal(0.0, sd);
  return s;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("entrain_test_" + tag + "_" +
             std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace entrain::testing

#endif  // ENTRAIN_TESTS_HELPERS_H_
