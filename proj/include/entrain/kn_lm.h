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

#ifndef ENTRAIN_KN_LM_H_
#define ENTRAIN_KN_LM_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace entrain {

using Sentence = std::vector<std::string>;

inline constexpr std::string_view kSentenceStart = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";
inline constexpr std::string_view kUnknownWord = "<unk>";

struct TrainOptions {
  // Predict an explicit end-of-sentence token.
  bool mark_sentence_end = true;
};

// Interpolated Kneser-Ney trigram model. Each sentence is preceded by one
// <s>. The highest order uses raw counts, lower orders use continuation
// counts (except n-grams that begin with <s>, which have no left context).
// Each order has its own discount D = n1 / (n1 + 2 n2) from the
// count-of-counts of that order, or 0.5 when n1 = 0. The unigram level is
// interpolated with a uniform distribution over the vocabulary plus <unk>;
// <unk> itself enters the unigram level as a type seen once.
class TrigramLm {
 public:
  static TrigramLm train(const std::vector<Sentence>& text,
                         const TrainOptions& opts = {});

  // Every vocabulary word has probability 1/|vocab| regardless of history;
  // <unk> gets none.
  static TrigramLm uniform(const std::vector<std::string>& vocab);

  // p(word | history). Only the last two history words are used; pass
  // "<s>" for the sentence start. Words outside the vocabulary are <unk>.
  double prob(std::string_view word,
              const std::vector<std::string>& history) const;

  bool in_vocabulary(std::string_view word) const;
  // Predictable words (training types and </s> when marked), sorted.
  std::vector<std::string> vocabulary() const;
  bool marks_sentence_end() const { return mark_end_; }
  // Discount of order 1, 2 or 3.
  double discount(int order) const { return discount_[order - 1]; }

  // Standard textual n-gram dump: log10 probabilities and log10 backoff
  // weights. Evaluating it with ordinary backoff gives prob() back.
  void write_arpa(std::ostream& out) const;

 private:
  struct HistoryStats {
    long total = 0;
    long types = 0;
  };

  TrigramLm() = default;
  int id_of(std::string_view word) const;
  double p1(int w) const;
  double p2(int v, int w) const;
  double p3(int u, int v, int w) const;
  double gamma2(int v) const;
  double gamma3(int u, int v) const;

  bool uniform_ = false;
  bool mark_end_ = true;
  std::vector<std::string> words_;  // id -> word; 0 is <s>, 1 is <unk>
  std::unordered_map<std::string, int> ids_;
  std::vector<long> unigram_;  // continuation counts by id
  long unigram_total_ = 0;
  long unigram_types_ = 0;
  long predictable_ = 0;       // |V|, excluding <s> and <unk>
  std::unordered_map<std::uint64_t, long> bigram_;
  std::unordered_map<int, HistoryStats> bigram_hist_;
  std::unordered_map<std::uint64_t, long> trigram_;
  std::unordered_map<std::uint64_t, HistoryStats> trigram_hist_;
  std::array<double, 3> discount_ = {0.5, 0.5, 0.5};
};

struct PerplexityResult {
  double perplexity = 0.0;
  std::size_t scored = 0;   // positions in N
  std::size_t skipped = 0;  // OOV positions left out
};

// exp(-(1/N) sum log p). With include_oov, unknown words are scored as
// <unk>; otherwise they are skipped and left out of N (they still serve as
// history). Throws DegenerateError when N = 0 or a scored word has zero
// probability.
PerplexityResult perplexity(const TrigramLm& lm,
                            const std::vector<Sentence>& text,
                            bool include_oov);

}  // namespace entrain

#endif  // ENTRAIN_KN_LM_H_
