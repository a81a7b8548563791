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

#ifndef ENTRAIN_FEATURE_DUMP_H_
#define ENTRAIN_FEATURE_DUMP_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "entrain/prosody.h"

namespace entrain {

// Per-utterance prosody, as written by `prosody` and read back by `entrain`.
// CSV columns: conversation, utterance_index, speaker, the twelve feature
// keys, missing_flags (one 0/1 character per feature, 1 = missing).
struct FeatureRow {
  std::string conversation_id;
  std::size_t utterance_index = 0;
  std::string speaker_id;
  ProsodyVector values;
};

void write_feature_dump(std::ostream& out, const std::vector<FeatureRow>& rows);
void write_feature_dump(const std::filesystem::path& path,
                        const std::vector<FeatureRow>& rows);

// Throws CorpusError naming the line of a malformed row.
std::vector<FeatureRow> read_feature_dump(std::istream& in,
                                          const std::string& source_name);
std::vector<FeatureRow> read_feature_dump(const std::filesystem::path& path);

// conversation -> utterance index -> values
using FeatureTable = std::map<std::string, std::map<std::size_t, FeatureRow>>;
FeatureTable index_features(const std::vector<FeatureRow>& rows);

}  // namespace entrain

#endif  // ENTRAIN_FEATURE_DUMP_H_
