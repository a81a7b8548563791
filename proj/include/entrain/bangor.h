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

#ifndef ENTRAIN_BANGOR_H_
#define ENTRAIN_BANGOR_H_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "entrain/corpus.h"

namespace entrain {

// Converts CHAT transcripts of the Bangor Miami corpus into the interchange
// model. Words carry the file's default language unless marked with an
// "@s:<lang>" suffix; "@s:eng+spa" style double marks become undetermined.
struct BangorOptions {
  std::string l1 = "spa";
  std::string l2 = "eng";
  std::string audio_extension = ".wav";
};

Conversation parse_chat(std::istream& in, const std::string& conversation_id,
                        const BangorOptions& opts = {});

// Reads every *.cha file of `dir`. Utterances without a time bullet are
// dropped; files that cannot be converted are reported as diagnostics.
ParseResult ingest_bangor(const std::filesystem::path& dir,
                          const BangorOptions& opts = {});

}  // namespace entrain

#endif  // ENTRAIN_BANGOR_H_
