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

#include "doctest.h"
#include "entrain/lexicon.h"
#include "entrain/word_classes.h"
#include "helpers.h"

using namespace entrain;
using namespace entrain::testing;

TEST_CASE("top_n orders by count then alphabetically") {
  std::map<std::string, long> counts = {{"c", 1}, {"a", 2}, {"b", 1}};
  CHECK(top_n(counts, 2) == std::vector<std::string>{"a", "b"});
  CHECK(top_n(counts, 10).size() == 3);
  CHECK(top_n({}, 5).empty());
}

TEST_CASE("lexical forms fold case, punctuation and variants") {
  const auto lex = default_cues();
  CHECK(lexical_form("Uhuh,", lex) == "uh-huh");
  CHECK(lexical_form("uh-huh", lex) == "uh-huh");
  CHECK(lexical_form("OK!", lex) == "okay");
  CHECK(lexical_form("Casa", lex) == "casa");
  CHECK(lexical_form("--", lex) == "");
}

TEST_CASE("word classes from a corpus") {
  Corpus corpus;
  corpus.conversations.push_back(
      conversation("c1", {{"A", "a a"}, {"B", "b c uhuh"}}));
  corpus.conversations.push_back(
      conversation("c2", {{"A", "x y"}, {"B", "z"}}));
  auto table = build_word_classes(corpus, default_cues(), default_fillers(),
                                  {.top_corpus = 2, .top_small = 2});
  CHECK(table.top100.members == std::set<std::string>{"a", "b"});
  CHECK(table.cues.members.count("uh-huh") == 1);
  CHECK(table.get(WordClassKind::kCues, "c1").members.count("uh-huh") == 1);

  const auto& t1 = table.get(WordClassKind::kTop25Conv, "c1").members;
  const auto& t2 = table.get(WordClassKind::kTop25Conv, "c2").members;
  CHECK(t1 == std::set<std::string>{"a", "b"});
  for (const auto& w : t1) CHECK(t2.count(w) == 0);

  auto counts = count_words(speaker_sentences(corpus.conversations[0], "B", default_cues()));
  CHECK(counts.all == 3);
  CHECK(counts.counts["uh-huh"] == 1);
}

TEST_CASE("short corpora truncate classes with a warning") {
  Corpus corpus;
  corpus.conversations.push_back(conversation("c1", {{"A", "a"}, {"B", "b"}}));
  auto table = build_word_classes(corpus, default_cues(), default_fillers());
  CHECK(table.top100.members.size() == 2);
  CHECK_FALSE(table.warnings.empty());
}

TEST_CASE("word class keys parse back") {
  for (auto k : all_word_classes()) CHECK(parse_word_class(word_class_key(k)) == k);
  CHECK_FALSE(parse_word_class("nope"));
}
