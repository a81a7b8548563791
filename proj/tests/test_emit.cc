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

#include <fstream>
#include <sstream>

#include "doctest.h"
#include "entrain/emit.h"
#include "entrain/error.h"
#include "entrain/feature_dump.h"
#include "entrain/lexical.h"
#include "entrain/pipeline.h"
#include "entrain/synth.h"
#include "helpers.h"
#include "json.hpp"

using namespace entrain;
using namespace entrain::testing;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// RFC 4180 fields of one line.
std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

ResultBundle synth_bundle() {
  SynthSpec spec;
  spec.turns = 40;
  FeatureSpec f;
  f.name = "pitch_mean";
  f.speaker_offset_sd = 0.5;
  spec.features = {f};
  spec.csw.p_a = spec.csw.p_b = 0.4;
  spec.seed = 21;
  auto synth = generate_corpus(spec, 6);
  return analyze(synth.corpus, RunConfig{}, index_features(synth.feature_rows()));
}

}  // namespace

TEST_CASE("number formats") {
  CHECK(format_p(0.032) == "0.032");
  CHECK(format_p(0.001) == "0.001");
  CHECK(format_p(8.49e-05) == "8.49e-05");
  CHECK(format_pct(76.9) == "76.9");
  CHECK(format_pct(50.0) == "50");
  CHECK(format_pct(23.0 / 24.0 * 50.0) == "47.9");
  CHECK(format_pct(7.0 / 15.0 * 50.0) == "23.3");
  CHECK(table_row("Min. pitch", 76.9, -2.14, 0.032) == "| Min. pitch | 76.9 | -2.14 | 0.032 |");
  CHECK(table_row("Jitter", std::nullopt, std::nullopt, std::nullopt) == "| Jitter | N/A | N/A | N/A |");
  CHECK(feature_display_label("pitch_min") == "Min. pitch");
  CHECK(feature_display_label("csw_ratio") == "CSW amt.");
  CHECK(feature_display_label("fillers") == "Fillers");
}

TEST_CASE("empty bundle gives header-only files") {
  TempDir dir("emit_empty");
  auto files = emit(ResultBundle{}, dir.path(), {"csv", "jsonl", "md"});
  CHECK(files.size() == 9);
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream s;
    s << in.rdbuf();
    const auto lines = lines_of(s.str());
    if (f.extension() == ".csv") CHECK(lines.size() == 1);
    if (f.extension() == ".jsonl") CHECK(lines.empty());
  }
  CHECK_THROWS_AS(emit(ResultBundle{}, "/proc/entrain_cannot_write", {"csv"}), Error);
}

TEST_CASE("CSV and JSONL carry the same numbers") {
  const auto b = synth_bundle();
  std::ostringstream csv, jsonl;
  write_results_csv(csv, b);
  write_results_jsonl(jsonl, b);
  const auto c = lines_of(csv.str());
  const auto j = lines_of(jsonl.str());
  REQUIRE(c.size() == j.size() + 1);
  REQUIRE(j.size() == b.results.size());
  const auto header = csv_fields(c[0]);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto rec = nlohmann::json::parse(j[i]);
    const auto row = csv_fields(c[i + 1]);
    REQUIRE(row.size() == header.size());
    for (std::size_t k = 0; k < header.size(); ++k) {
      const auto& v = rec.at(header[k]);
      CAPTURE(header[k]);
      if (v.is_null()) CHECK(row[k].empty());
      else if (v.is_string()) CHECK(row[k] == v.get<std::string>());
      else if (v.is_number_float()) CHECK(std::stod(row[k]) == v.get<double>());
      else if (v.is_number_unsigned()) CHECK(std::stoull(row[k]) == v.get<std::uint64_t>());
    }
  }

  std::ostringstream scsv, sjsonl;
  write_summary_csv(scsv, b);
  write_summary_jsonl(sjsonl, b);
  CHECK(lines_of(scsv.str()).size() == lines_of(sjsonl.str()).size() + 1);
}

TEST_CASE("markdown tables come from summary cells") {
  const auto b = synth_bundle();
  std::ostringstream md;
  write_markdown(md, b);
  const std::string text = md.str();
  for (const auto& s : b.summaries) {
    if (s.feature != "pitch_mean" || s.measure != "TURN_PROX" || s.scope != "corpus") continue;
    const auto row = table_row("Mean pitch", s.pct_detected, s.statistic, s.p);
    CHECK(text.find(row) != std::string::npos);
  }
  CHECK(text.find("## Gender") != std::string::npos);
}

TEST_CASE("gender table from per-conversation verdict fixtures") {
  // Same-gender and mixed-gender verdict counts chosen to give
  // 50/50, 50/46.7, 50/46.7, 50/50, 47.9/50, 50/46.7, 41.7/30.
  const std::vector<std::tuple<std::string, int, int>> fixture = {
      {"top100_corpus", 24, 15}, {"top25_corpus", 24, 14}, {"top25_conv", 24, 14},
      {"cues", 24, 15},          {"fillers", 23, 15},      {"ppl_incl_oov", 24, 14},
      {"ppl_excl_oov", 20, 9}};
  std::map<std::string, std::pair<Gender, Gender>> genders;
  for (int i = 0; i < 24; ++i)
    genders["s" + std::to_string(i)] = {Gender::kFemale, Gender::kFemale};
  for (int i = 0; i < 15; ++i)
    genders["m" + std::to_string(i)] = {Gender::kFemale, Gender::kMale};
  ResultBundle b;
  for (const auto& [feature, same, mixed] : fixture) {
    std::map<std::string, bool> verdicts;
    for (int i = 0; i < 24; ++i) verdicts["s" + std::to_string(i)] = i < same;
    for (int i = 0; i < 15; ++i) verdicts["m" + std::to_string(i)] = i < mixed;
    b.gender.push_back(gender_weighted_pct(feature, "LEXICAL", verdicts, genders));
  }
  std::ostringstream md;
  write_markdown(md, b);
  const std::string text = md.str();
  const char* expected[] = {
      "| Top 100 (corpus) | 50 | 50 |",       "| Top 25 (corpus) | 50 | 46.7 |",
      "| Top 25 (conversation) | 50 | 46.7 |", "| Affirmative cues | 50 | 50 |",
      "| Fillers | 47.9 | 50 |",              "| Perplexity (incl. OOV) | 50 | 46.7 |",
      "| Perplexity (excl. OOV) | 41.7 | 30 |"};
  for (const char* row : expected) {
    CAPTURE(row);
    CHECK(text.find(row) != std::string::npos);
  }
}
