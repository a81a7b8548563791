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

#ifndef ENTRAIN_EMIT_H_
#define ENTRAIN_EMIT_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "entrain/pipeline.h"

namespace entrain {

// Human-readable label for any feature key ("pitch_min" -> "Min. pitch").
std::string feature_display_label(const std::string& key);

// "0.032" for p >= 0.001, "8.49e-05" below.
std::string format_p(double p);
// One decimal with a trailing ".0" dropped: 47.9, 50.
std::string format_pct(double pct);
// "| Min. pitch | 76.9 | -2.14 | 0.032 |"
std::string table_row(const std::string& label, std::optional<double> pct,
                      std::optional<double> t, std::optional<double> p);

void write_results_csv(std::ostream& out, const ResultBundle& b);
void write_summary_csv(std::ostream& out, const ResultBundle& b);
void write_gender_csv(std::ostream& out, const ResultBundle& b);
void write_manifest_csv(std::ostream& out, const ResultBundle& b);
void write_results_jsonl(std::ostream& out, const ResultBundle& b);
void write_summary_jsonl(std::ostream& out, const ResultBundle& b);
void write_gender_jsonl(std::ostream& out, const ResultBundle& b);
void write_manifest_jsonl(std::ostream& out, const ResultBundle& b);
void write_markdown(std::ostream& out, const ResultBundle& b);

// Writes results/summary/gender/manifest in each requested format
// ("csv", "jsonl") plus report.md for "md". Returns the files written.
std::vector<std::filesystem::path> emit(const ResultBundle& b,
                                        const std::filesystem::path& dir,
                                        const std::vector<std::string>& formats);

}  // namespace entrain

#endif  // ENTRAIN_EMIT_H_
