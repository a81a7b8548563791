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

#include "entrain/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "entrain/error.h"

namespace entrain {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

AudioSignal AudioSignal::slice(double start_s, double end_s) const {
  AudioSignal out;
  out.sample_rate = sample_rate;
  const auto n = static_cast<double>(samples.size());
  const auto b = static_cast<std::size_t>(
      std::clamp(std::round(start_s * sample_rate), 0.0, n));
  const auto e = static_cast<std::size_t>(
      std::clamp(std::round(end_s * sample_rate), 0.0, n));
  if (e > b) out.samples.assign(samples.begin() + static_cast<long>(b),
                                samples.begin() + static_cast<long>(e));
  return out;
}

AudioSignal read_audio(const std::filesystem::path& path, int channel) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw AudioError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string name = path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw AudioError(name + ": not a RIFF/WAVE file");

  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    const std::uint32_t size = le32(hdr + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (avail < 16) throw AudioError(name + ": truncated fmt chunk");
      const unsigned char* f = bytes.data() + body;
      format = le16(f);
      channels = le16(f + 2);
      rate = le32(f + 4);
      bits = le16(f + 14);
      if (format == kFormatExtensible) {
        if (avail < 26) throw AudioError(name + ": truncated fmt chunk");
        format = le16(f + 24);
      }
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = avail;
    }
    pos = body + size + (size & 1);
  }
  if (channels == 0 || rate == 0)
    throw AudioError(name + ": missing or invalid fmt chunk");
  if (!data) throw AudioError(name + ": missing data chunk");
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32)
    throw AudioError(name + ": unsupported encoding (format " +
                     std::to_string(format) + ", " + std::to_string(bits) +
                     " bits); expected 16-bit PCM or 32-bit float");
  if (channel < 0 || channel >= channels)
    throw AudioError(name + ": channel " + std::to_string(channel) +
                     " out of range (file has " + std::to_string(channels) +
                     ")");

  AudioSignal sig;
  sig.sample_rate = rate;
  const std::size_t width = bits / 8;
  const std::size_t frame = width * channels;
  const std::size_t frames = data_size / frame;
  sig.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const unsigned char* p =
        data + i * frame + static_cast<std::size_t>(channel) * width;
    if (pcm16) {
      const auto v = static_cast<std::int16_t>(le16(p));
      sig.samples[i] = static_cast<double>(v) / 32768.0;
    } else {
      const std::uint32_t raw = le32(p);
      float v;
      std::memcpy(&v, &raw, sizeof v);
      sig.samples[i] = static_cast<double>(v);
    }
  }
  if (sig.samples.empty()) throw AudioError(name + ": no samples");
  return sig;
}

void write_wav(const std::filesystem::path& path,
               const std::vector<std::vector<double>>& channels,
               double sample_rate, WavEncoding encoding) {
  if (channels.empty()) throw AudioError("write_wav: no channels");
  const std::size_t frames = channels.front().size();
  for (const auto& c : channels) {
    if (c.size() != frames)
      throw AudioError("write_wav: channels differ in length");
  }
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const auto nch = static_cast<std::uint16_t>(channels.size());
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(frames * nch * (bits / 8));
  const auto rate = static_cast<std::uint32_t>(sample_rate);

  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put32(out, 16);
  put16(out, pcm ? kFormatPcm : kFormatFloat);
  put16(out, nch);
  put32(out, rate);
  put32(out, rate * nch * (bits / 8));
  put16(out, static_cast<std::uint16_t>(nch * (bits / 8)));
  put16(out, bits);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put32(out, data_size);
  for (std::size_t i = 0; i < frames; ++i) {
    for (const auto& c : channels) {
      const double x = std::clamp(c[i], -1.0, 1.0);
      if (pcm) {
        const auto v = static_cast<std::int16_t>(
            std::clamp(std::lround(x * 32768.0), -32768L, 32767L));
        put16(out, static_cast<std::uint16_t>(v));
      } else {
        const auto f = static_cast<float>(x);
        std::uint32_t raw;
        std::memcpy(&raw, &f, sizeof raw);
        put32(out, raw);
      }
    }
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw AudioError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
}

}  // namespace entrain
