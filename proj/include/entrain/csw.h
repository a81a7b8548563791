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

#ifndef ENTRAIN_CSW_H_
#define ENTRAIN_CSW_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "entrain/corpus.h"
#include "entrain/lexicon.h"

namespace entrain {

enum class LabelSource { kNone, kHeuristic, kManual };
std::string_view label_source_name(LabelSource s);

struct CswFeatures {
  bool presence = false;
  double ratio = 0.0;      // non-matrix tokens / all tokens
  StrategySet strategies;  // empty <=> monolingual
  LabelSource source = LabelSource::kNone;

  bool operator==(const CswFeatures&) const = default;
};

// Majority language among l1/l2 tokens, ties going to the first tagged
// token. Throws Error("no determinable language") if every token is und.
Lang matrix_language(const Utterance& utt);

// Heuristic strategy labels for a code-switched utterance; `edge_words` is
// the filler/cue lexicon. Rules fire independently:
//   O  an edge token from the lexicon is tagged opposite to the matrix
//      language of the rest of the utterance;
//   I  some maximal non-matrix span has at most 2 tokens and is not an
//      edge run of lexicon words;
//   A  both languages have a maximal span of at least 3 tokens.
// Undetermined tokens break spans. Throws ContractViolation on monolingual
// input.
StrategySet classify_strategy(const Utterance& utt, const Lexicon& edge_words);

// Manual labels on the utterance win over the heuristic.
CswFeatures csw_features(const Utterance& utt, const Lexicon& edge_words);

// Per-utterance features for a whole conversation. Utterances whose tokens
// are all undetermined count as monolingual.
std::vector<CswFeatures> conversation_csw(const Conversation& conv,
                                          const Lexicon& edge_words);

struct StrategyOverride {
  std::string conversation_id;
  std::size_t utterance_index = 0;
  StrategySet strategies;
  std::size_t line = 0;  // source line, for diagnostics
};

std::vector<StrategyOverride> parse_overrides(std::istream& in,
                                              const std::string& source_name);
std::vector<StrategyOverride> read_overrides(const std::filesystem::path& p);

// Writes manual labels into the referenced utterances. Every dangling or
// monolingual reference is collected and reported in one CorpusError.
Corpus apply_overrides(Corpus corpus,
                       const std::vector<StrategyOverride>& overrides);

struct CswStats {
  std::size_t utterances = 0;
  std::size_t monolingual = 0;
  std::size_t code_switched = 0;
  std::size_t insertional = 0;
  std::size_t alternational = 0;
  std::size_t other = 0;
  std::size_t manual_labels = 0;

  double pct_monolingual() const;
  // Shares of code-switched utterances; may sum past 100.
  double pct_insertional() const;
  double pct_alternational() const;
  double pct_other() const;
};

CswStats corpus_csw_stats(const Corpus& corpus, const Lexicon& edge_words);

}  // namespace entrain

#endif  // ENTRAIN_CSW_H_
