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

#ifndef ENTRAIN_WORD_CLASSES_H_
#define ENTRAIN_WORD_CLASSES_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "entrain/corpus.h"
#include "entrain/lexicon.h"

namespace entrain {

enum class WordClassKind {
  kTop100Corpus,
  kTop25Corpus,
  kTop25Conv,
  kCues,
  kFillers,
};

const std::array<WordClassKind, 5>& all_word_classes();
std::string_view word_class_key(WordClassKind k);    // "top100_corpus"
std::string_view word_class_label(WordClassKind k);  // "Top 100 (corpus)"
std::optional<WordClassKind> parse_word_class(std::string_view key);

struct WordClass {
  WordClassKind kind = WordClassKind::kTop100Corpus;
  std::set<std::string> members;
};

// Normalized form used for every lexical count: case-folded, edge
// punctuation stripped, spelling variants in `variants` mapped to their
// canonical form. Returns an empty string for tokens with no letters.
std::string lexical_form(std::string_view surface, const Lexicon& variants);

// One utterance per inner vector, in lexical form, empty forms dropped.
std::vector<std::vector<std::string>> speaker_sentences(
    const Conversation& conv, std::string_view speaker_id,
    const Lexicon& variants);

struct SpeakerCounts {
  std::map<std::string, long> counts;
  long all = 0;  // every word the speaker said in the conversation
};

SpeakerCounts count_words(const std::vector<std::vector<std::string>>& text);

// The n most frequent words, ties broken alphabetically. Returns fewer than
// n when the counts hold fewer distinct words.
std::vector<std::string> top_n(const std::map<std::string, long>& counts,
                               std::size_t n);

struct WordClassTable {
  WordClass top100;
  WordClass top25;
  WordClass cues;
  WordClass fillers;
  std::map<std::string, WordClass> top25_conv;  // by conversation id
  std::vector<std::string> warnings;

  // The class in force for a speaker of `conversation_id`.
  const WordClass& get(WordClassKind k,
                       const std::string& conversation_id) const;
};

struct WordClassOptions {
  std::size_t top_corpus = 100;
  std::size_t top_small = 25;
};

// Frequency classes come from the whole corpus (and from each conversation
// for the per-conversation class). Cue and filler classes are the canonical
// lexicon members. Lexicon variants are folded into canonical forms before
// counting.
WordClassTable build_word_classes(const Corpus& corpus, const Lexicon& cues,
                                  const Lexicon& fillers,
                                  const WordClassOptions& opts = {});

}  // namespace entrain

#endif  // ENTRAIN_WORD_CLASSES_H_
