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

#ifndef ENTRAIN_WAV_H_
#define ENTRAIN_WAV_H_

#include <filesystem>
#include <span>
#include <vector>

namespace entrain {

struct AudioSignal {
  std::vector<double> samples;  // normalized to [-1, 1]
  double sample_rate = 0.0;     // Hz

  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  // Samples in [start_s, end_s), clamped to the signal.
  AudioSignal slice(double start_s, double end_s) const;
};

enum class WavEncoding { kPcm16, kFloat32 };

// Reads one channel of a PCM WAV file (16-bit integer or 32-bit float, any
// channel count). Throws AudioError for anything else.
AudioSignal read_audio(const std::filesystem::path& path, int channel = 0);

// `channels` must be non-empty and of equal length.
void write_wav(const std::filesystem::path& path,
               const std::vector<std::vector<double>>& channels,
               double sample_rate, WavEncoding encoding = WavEncoding::kPcm16);

}  // namespace entrain

#endif  // ENTRAIN_WAV_H_
