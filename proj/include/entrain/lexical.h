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

#ifndef ENTRAIN_LEXICAL_H_
#define ENTRAIN_LEXICAL_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "entrain/corpus.h"
#include "entrain/kn_lm.h"
#include "entrain/lexicon.h"
#include "entrain/stats.h"
#include "entrain/word_classes.h"

namespace entrain {

// -sum over w in `members` of |count_a(w)/ALL_a - count_b(w)/ALL_b|.
// 0 is perfect entrainment. Throws DegenerateError if either ALL is zero.
double class_entrainment(const SpeakerCounts& a, const SpeakerCounts& b,
                         const std::set<std::string>& members);

// One speaker in one conversation.
struct Side {
  std::string conversation_id;
  std::string speaker_id;
  std::vector<Sentence> text;  // lexical forms, one sentence per utterance
  SpeakerCounts counts;
};

// Both speakers of every dyad, in corpus order. Speakers without words are
// left out.
std::vector<Side> collect_sides(const Corpus& corpus, const Lexicon& variants);

// Score of one side against its partner and against every side of every
// other conversation.
struct SideScore {
  std::string conversation_id;
  std::string speaker_id;
  double partner = 0.0;
  std::vector<double> nonpartner;

  double baseline() const;
};

// Lexical feature keys: the five word classes, then "ppl_incl_oov" and
// "ppl_excl_oov".
std::vector<std::string> lexical_feature_keys();
std::string lexical_feature_label(const std::string& key);
// Perplexity features: lower partner values mean entrainment.
bool lower_is_entrained(const std::string& key);

// Per-conversation verdict: rank of the partner scores of both sides among
// their non-partner scores.
struct ConversationVerdict {
  double mean_difference = 0.0;  // mean over sides of partner - baseline
  std::optional<RankTestResult> test;
  bool entraining = false;
  std::string note;  // why the test is missing
};

struct LexicalMeasure {
  std::string feature;
  std::vector<SideScore> sides;
  std::optional<StatResult> corpus_test;  // paired t, partner vs baseline
  bool corpus_entraining = false;
  std::map<std::string, ConversationVerdict> conversations;
  std::vector<std::string> diagnostics;
};

// Per side: the class score against the partner and against every side of
// every other conversation.
// Throws Error("no non-partners") for corpora of fewer than two
// conversations.
std::vector<SideScore> nonpartner_baseline(const std::vector<Side>& sides,
                                           const WordClassTable& table,
                                           WordClassKind kind);

// Directed perplexity scores, one per side: the side's model evaluated on
// its partner and on every non-partner side. Values are perplexities, not
// negated. Pairs with no scorable words are left out with a diagnostic.
std::vector<SideScore> perplexity_scores(const std::vector<Side>& sides,
                                         bool include_oov,
                                         std::vector<std::string>& diagnostics,
                                         const TrainOptions& opts = {});

struct LmEntrainment {
  std::string speaker_a;
  std::string speaker_b;
  double a_on_b = 0.0;  // -ppl of A's model on B's words
  double b_on_a = 0.0;
};

// Trains one model per speaker of a dyad and evaluates it on the other.
LmEntrainment lm_entrainment(const Conversation& conv, const Lexicon& variants,
                             bool include_oov, const TrainOptions& opts = {});

// Corpus-level paired t of partner against baseline over sides, plus a
// per-conversation rank test.
LexicalMeasure summarize_lexical(const std::string& feature,
                                 std::vector<SideScore> sides, double alpha);

std::vector<LexicalMeasure> run_lexical(const Corpus& corpus,
                                        const Lexicon& cues,
                                        const Lexicon& fillers, double alpha);

}  // namespace entrain

#endif  // ENTRAIN_LEXICAL_H_
