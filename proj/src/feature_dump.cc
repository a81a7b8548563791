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

#include "entrain/feature_dump.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "entrain/error.h"
#include "entrain/text.h"

namespace entrain {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  for (char c : line) {
    if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

std::string header() {
  std::string h = "conversation,utterance_index,speaker";
  for (auto f : all_prosody_features()) {
    h += ',';
    h += feature_key(f);
  }
  return h + ",missing_flags";
}

}  // namespace

void write_feature_dump(std::ostream& out,
                        const std::vector<FeatureRow>& rows) {
  out << header() << '\n';
  char buf[40];
  for (const auto& r : rows) {
    if (r.conversation_id.find(',') != std::string::npos ||
        r.speaker_id.find(',') != std::string::npos)
      throw Error("feature dump ids must not contain commas");
    out << r.conversation_id << ',' << r.utterance_index << ','
        << r.speaker_id;
    std::string flags;
    for (auto f : all_prosody_features()) {
      out << ',';
      if (r.values[f]) {
        std::snprintf(buf, sizeof buf, "%.17g", *r.values[f]);
        out << buf;
        flags += '0';
      } else {
        flags += '1';
      }
    }
    out << ',' << flags << '\n';
  }
}

void write_feature_dump(const std::filesystem::path& path,
                        const std::vector<FeatureRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_feature_dump(out, rows);
}

std::vector<FeatureRow> read_feature_dump(std::istream& in,
                                          const std::string& source_name) {
  std::vector<FeatureRow> rows;
  std::string line;
  std::size_t lineno = 0;
  const std::size_t width = 4 + kProsodyFeatureCount;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (lineno == 1) {
      if (std::string(trim(line)) != header())
        throw CorpusError(source_name, lineno, "unexpected feature header");
      continue;
    }
    const auto cells = split_csv(line);
    if (cells.size() != width)
      throw CorpusError(source_name, lineno,
                        "expected " + std::to_string(width) + " columns");
    FeatureRow r;
    r.conversation_id = cells[0];
    r.speaker_id = cells[2];
    const auto& idx = cells[1];
    auto [p, ec] = std::from_chars(idx.data(), idx.data() + idx.size(),
                                   r.utterance_index);
    if (ec != std::errc() || p != idx.data() + idx.size())
      throw CorpusError(source_name, lineno, "bad utterance_index '" + idx + "'");
    const std::string& flags = cells.back();
    if (flags.size() != kProsodyFeatureCount)
      throw CorpusError(source_name, lineno, "bad missing_flags");
    for (std::size_t i = 0; i < kProsodyFeatureCount; ++i) {
      const auto f = all_prosody_features()[i];
      const std::string& cell = cells[3 + i];
      if (flags[i] == '1') {
        if (!cell.empty())
          throw CorpusError(source_name, lineno,
                            std::string(feature_key(f)) +
                                " flagged missing but has a value");
        continue;
      }
      if (flags[i] != '0')
        throw CorpusError(source_name, lineno, "bad missing_flags");
      double v = 0.0;
      auto [q, ec2] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec2 != std::errc() || q != cell.data() + cell.size())
        throw CorpusError(source_name, lineno,
                          "bad value for " + std::string(feature_key(f)));
      r.values[f] = v;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<FeatureRow> read_feature_dump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  return read_feature_dump(in, path.string());
}

FeatureTable index_features(const std::vector<FeatureRow>& rows) {
  FeatureTable t;
  for (const auto& r : rows) t[r.conversation_id][r.utterance_index] = r;
  return t;
}

}  // namespace entrain
