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

#include <cmath>

#include "doctest.h"
#include "entrain/error.h"
#include "entrain/lexical.h"
#include "entrain/lexicon.h"
#include "entrain/rng.h"
#include "entrain/synth.h"
#include "helpers.h"

using namespace entrain;
using namespace entrain::testing;

namespace {

SpeakerCounts counts(std::map<std::string, long> c, long all) {
  return {std::move(c), all};
}

const Lexicon& variants() {
  static const Lexicon lex = default_cues().merged_with(default_fillers());
  return lex;
}

// Each conversation draws its words from its own skewed distribution over a
// shared 40-word vocabulary; both speakers share it.
Corpus skewed_corpus(std::uint64_t seed, std::size_t conversations) {
  Rng rng(seed);
  Corpus corpus;
  for (std::size_t c = 0; c < conversations; ++c) {
    std::vector<double> weights(40);
    for (auto& w : weights) w = rng.gamma(0.3);
    double sum = 0.0;
    for (double w : weights) sum += w;
    for (auto& w : weights) w /= sum;
    std::vector<std::pair<std::string, std::string>> lines;
    for (int turn = 0; turn < 20; ++turn) {
      std::string text;
      for (int k = 0; k < 6; ++k)
        text += "w" + std::to_string(rng.categorical(weights)) + " ";
      lines.emplace_back(turn % 2 ? "B" : "A", text);
    }
    corpus.conversations.push_back(conversation("c" + std::to_string(c), lines));
  }
  return corpus;
}

}  // namespace

TEST_CASE("class entrainment examples") {
  const std::set<std::string> okay = {"okay"};
  CHECK(class_entrainment(counts({{"okay", 2}}, 4), counts({{"okay", 2}}, 4), okay) == 0.0);
  CHECK(class_entrainment(counts({{"okay", 2}}, 4), counts({{"okay", 1}}, 4), okay) ==
        doctest::Approx(-0.25));
  CHECK(class_entrainment(counts({{"si", 1}, {"yeah", 1}}, 2), counts({{"si", 2}}, 2),
                          {"si", "yeah"}) == doctest::Approx(-1.0));
  CHECK(class_entrainment(counts({}, 3), counts({{"x", 1}}, 1), okay) == 0.0);
  CHECK_THROWS_AS(class_entrainment(counts({}, 0), counts({{"x", 1}}, 1), okay),
                  DegenerateError);
}

TEST_CASE("class entrainment is symmetric and non-positive") {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    SpeakerCounts a, b;
    std::set<std::string> members;
    for (int w = 0; w < 6; ++w) {
      const std::string word = "w" + std::to_string(w);
      if (rng.bernoulli(0.5)) members.insert(word);
      if (long n = static_cast<long>(rng.uniform_int(4))) {
        a.counts[word] = n;
        a.all += n;
      }
      if (long n = static_cast<long>(rng.uniform_int(4))) {
        b.counts[word] = n;
        b.all += n;
      }
    }
    if (a.all == 0 || b.all == 0) continue;
    const double ab = class_entrainment(a, b, members);
    CHECK(ab <= 0.0);
    CHECK(ab == class_entrainment(b, a, members));
    CHECK(class_entrainment(a, a, members) == 0.0);
  }
}

TEST_CASE("two conversations give two non-partners per side") {
  Corpus corpus;
  corpus.conversations.push_back(conversation("c1", {{"A", "hola okay"}, {"B", "yeah okay"}}));
  corpus.conversations.push_back(conversation("c2", {{"A", "okay"}, {"B", "sí sí okay"}}));
  auto sides = collect_sides(corpus, variants());
  REQUIRE(sides.size() == 4);
  auto table = build_word_classes(corpus, default_cues(), default_fillers());
  auto scores = nonpartner_baseline(sides, table, WordClassKind::kTop100Corpus);
  REQUIRE(scores.size() == 4);
  for (const auto& s : scores) CHECK(s.nonpartner.size() == 2);

  Corpus single;
  single.conversations.push_back(corpus.conversations[0]);
  auto lone = collect_sides(single, variants());
  CHECK_THROWS_AS(nonpartner_baseline(lone, build_word_classes(single, default_cues(),
                                                               default_fillers()),
                                      WordClassKind::kTop100Corpus),
                  Error);
}

TEST_CASE("identical speakers score zero everywhere") {
  Corpus corpus;
  for (int c = 0; c < 3; ++c)
    corpus.conversations.push_back(conversation(
        "c" + std::to_string(c), {{"A", "hola okay casa"}, {"B", "casa hola okay"}}));
  auto sides = collect_sides(corpus, variants());
  auto table = build_word_classes(corpus, default_cues(), default_fillers());
  for (auto k : all_word_classes()) {
    for (const auto& s : nonpartner_baseline(sides, table, k)) {
      CHECK(s.partner == 0.0);
      for (double x : s.nonpartner) CHECK(x == 0.0);
    }
  }
}

TEST_CASE("shared skewed vocabulary puts partners above the baseline") {
  int wins = 0;
  for (int seed = 0; seed < 100; ++seed) {
    auto corpus = skewed_corpus(static_cast<std::uint64_t>(seed), 4);
    auto sides = collect_sides(corpus, variants());
    auto table = build_word_classes(corpus, default_cues(), default_fillers());
    auto scores = nonpartner_baseline(sides, table, WordClassKind::kTop100Corpus);
    wins += scores[0].partner > scores[0].baseline();
  }
  CHECK(wins >= 95);
}

TEST_CASE("identical transcripts give equal directed perplexities") {
  auto conv = conversation("c", {{"A", "hola amigo como estas"}, {"B", "hola amigo como estas"}});
  for (bool oov : {true, false}) {
    auto r = lm_entrainment(conv, variants(), oov);
    CHECK(r.a_on_b == r.b_on_a);
    CHECK(r.a_on_b < 0.0);
  }
}

TEST_CASE("shared topic words lower partner perplexity") {
  SynthSpec spec;
  spec.turns = 40;
  spec.lexical.topic_rate = 0.3;
  int wins = 0;
  for (int seed = 0; seed < 100; ++seed) {
    spec.seed = static_cast<std::uint64_t>(seed);
    auto synth = generate_corpus(spec, 4);
    auto sides = collect_sides(synth.corpus, variants());
    std::vector<std::string> diag;
    auto scores = perplexity_scores(sides, true, diag);
    // Directed -ppl: the partner is the better fit.
    wins += -scores[0].partner > -scores[0].baseline();
  }
  CHECK(wins >= 95);
}

TEST_CASE("corpus-level perplexity test runs negative under topic sharing") {
  SynthSpec spec;
  spec.turns = 40;
  spec.lexical.topic_rate = 0.3;
  spec.seed = 5;
  auto synth = generate_corpus(spec, 12);
  auto sides = collect_sides(synth.corpus, variants());
  std::vector<std::string> diag;
  auto m = summarize_lexical("ppl_incl_oov", perplexity_scores(sides, true, diag), 0.05);
  REQUIRE(m.corpus_test);
  CHECK(m.corpus_test->statistic < 0.0);
  CHECK(m.corpus_entraining);
  CHECK(m.conversations.size() == 12);
  for (const auto& [id, v] : m.conversations) {
    REQUIRE(v.test);
    CHECK(v.mean_difference < 0.0);
  }
}

TEST_CASE("run_lexical reports every feature") {
  auto corpus = skewed_corpus(3, 5);
  auto all = run_lexical(corpus, default_cues(), default_fillers(), 0.05);
  REQUIRE(all.size() == lexical_feature_keys().size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(all[i].feature == lexical_feature_keys()[i]);
    CHECK_FALSE(lexical_feature_label(all[i].feature).empty());
  }
  CHECK(lower_is_entrained("ppl_excl_oov"));
  CHECK_FALSE(lower_is_entrained("cues"));
}
