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

#include "entrain/word_classes.h"

#include <algorithm>
#include <utility>

#include "entrain/error.h"
#include "entrain/text.h"

namespace entrain {

namespace {

constexpr std::array<WordClassKind, 5> kAll = {
    WordClassKind::kTop100Corpus, WordClassKind::kTop25Corpus,
    WordClassKind::kTop25Conv, WordClassKind::kCues, WordClassKind::kFillers};

constexpr std::array<std::string_view, 5> kKeys = {
    "top100_corpus", "top25_corpus", "top25_conv", "cues", "fillers"};

constexpr std::array<std::string_view, 5> kLabels = {
    "Top 100 (corpus)", "Top 25 (corpus)", "Top 25 (conversation)",
    "Affirmative cues", "Fillers"};

WordClass make_class(WordClassKind kind, const std::vector<std::string>& w) {
  WordClass c;
  c.kind = kind;
  c.members.insert(w.begin(), w.end());
  return c;
}

}  // namespace

const std::array<WordClassKind, 5>& all_word_classes() { return kAll; }

std::string_view word_class_key(WordClassKind k) {
  return kKeys[static_cast<std::size_t>(k)];
}

std::string_view word_class_label(WordClassKind k) {
  return kLabels[static_cast<std::size_t>(k)];
}

std::optional<WordClassKind> parse_word_class(std::string_view key) {
  for (std::size_t i = 0; i < kAll.size(); ++i) {
    if (kKeys[i] == key) return kAll[i];
  }
  return std::nullopt;
}

std::string lexical_form(std::string_view surface, const Lexicon& variants) {
  std::string w = normalize_word(surface);
  if (w.empty()) return w;
  if (auto c = variants.canonical(w)) return *c;
  return w;
}

std::vector<std::vector<std::string>> speaker_sentences(
    const Conversation& conv, std::string_view speaker_id,
    const Lexicon& variants) {
  std::vector<std::vector<std::string>> out;
  for (const auto& u : conv.utterances) {
    if (u.speaker_id != speaker_id) continue;
    std::vector<std::string> s;
    for (const auto& t : u.tokens) {
      std::string w = lexical_form(t.surface, variants);
      if (!w.empty()) s.push_back(std::move(w));
    }
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

SpeakerCounts count_words(const std::vector<std::vector<std::string>>& text) {
  SpeakerCounts c;
  for (const auto& s : text) {
    for (const auto& w : s) {
      ++c.counts[w];
      ++c.all;
    }
  }
  return c;
}

std::vector<std::string> top_n(const std::map<std::string, long>& counts,
                               std::size_t n) {
  std::vector<std::pair<std::string, long>> v(counts.begin(), counts.end());
  // std::map iterates alphabetically, so a stable sort keeps ties in order.
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size() && i < n; ++i) out.push_back(v[i].first);
  return out;
}

const WordClass& WordClassTable::get(WordClassKind k,
                                     const std::string& conversation_id) const {
  switch (k) {
    case WordClassKind::kTop100Corpus:
      return top100;
    case WordClassKind::kTop25Corpus:
      return top25;
    case WordClassKind::kCues:
      return cues;
    case WordClassKind::kFillers:
      return fillers;
    case WordClassKind::kTop25Conv:
      break;
  }
  auto it = top25_conv.find(conversation_id);
  if (it == top25_conv.end())
    throw ContractViolation("no per-conversation class for " + conversation_id);
  return it->second;
}

WordClassTable build_word_classes(const Corpus& corpus, const Lexicon& cues,
                                  const Lexicon& fillers,
                                  const WordClassOptions& opts) {
  const Lexicon variants = cues.merged_with(fillers);
  WordClassTable table;
  std::map<std::string, long> corpus_counts;
  for (const auto& conv : corpus.conversations) {
    std::map<std::string, long> conv_counts;
    for (const auto& sp : conv.speakers) {
      for (const auto& [w, n] :
           count_words(speaker_sentences(conv, sp.id, variants)).counts) {
        conv_counts[w] += n;
        corpus_counts[w] += n;
      }
    }
    auto top = top_n(conv_counts, opts.top_small);
    if (top.size() < opts.top_small) {
      table.warnings.push_back("conversation " + conv.id + " has only " +
                               std::to_string(top.size()) +
                               " distinct words; top-" +
                               std::to_string(opts.top_small) + " truncated");
    }
    table.top25_conv[conv.id] = make_class(WordClassKind::kTop25Conv, top);
  }
  auto top_big = top_n(corpus_counts, opts.top_corpus);
  if (top_big.size() < opts.top_corpus) {
    table.warnings.push_back("corpus has only " +
                             std::to_string(top_big.size()) +
                             " distinct words; top-" +
                             std::to_string(opts.top_corpus) + " truncated");
  }
  table.top100 = make_class(WordClassKind::kTop100Corpus, top_big);
  table.top25 = make_class(WordClassKind::kTop25Corpus,
                           top_n(corpus_counts, opts.top_small));
  table.cues.kind = WordClassKind::kCues;
  table.cues.members = cues.members();
  table.fillers.kind = WordClassKind::kFillers;
  table.fillers.members = fillers.members();
  return table;
}

}  // namespace entrain
