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

#include <fstream>
#include <sstream>

#include "doctest.h"
#include "entrain/bangor.h"
#include "entrain/corpus.h"
#include "entrain/error.h"
#include "entrain/lexicon.h"
#include "entrain/text.h"
#include "helpers.h"

using namespace entrain;
using namespace entrain::testing;

namespace {

const char* kHeader =
    R"({"conversation_id":"c1","speakers":[{"id":"A","gender":"F"},{"id":"B","gender":"M"}]})";

Conversation parse(const std::string& body) {
  std::istringstream in(std::string(kHeader) + "\n" + body);
  return parse_conversation(in, "c1.jsonl");
}

}  // namespace

TEST_CASE("parse_conversation reads header and utterances") {
  auto c = parse(
      R"({"speaker":"B","start_s":1.0,"end_s":2.0,"tokens":[{"w":"yeah","lang":"l2"}]})"
      "\n"
      R"({"speaker":"A","start_s":0.0,"end_s":1.0,"tokens":[{"w":"hola","lang":"l1"},{"w":"okay","lang":"l2"}]})"
      "\n");
  CHECK(c.id == "c1");
  REQUIRE(c.speakers.size() == 2);
  CHECK(c.speakers[0].gender == Gender::kFemale);
  REQUIRE(c.utterances.size() == 2);
  // Sorted by start time.
  CHECK(c.utterances[0].speaker_id == "A");
  CHECK(c.utterances[0].tokens[1].lang == Lang::kL2);
  CHECK(c.is_dyadic());
  CHECK(c.partner_of("A").id == "B");
}

TEST_CASE("unknown language tag is rejected with the tag and line") {
  try {
    parse(R"({"speaker":"A","start_s":0,"end_s":1,"tokens":[{"w":"bonjour","lang":"fra"}]})"
          "\n");
    FAIL("expected CorpusError");
  } catch (const CorpusError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("fra") != std::string::npos);
  }
}

TEST_CASE("zero-length utterance is rejected") {
  CHECK_THROWS_AS(
      parse(R"({"speaker":"A","start_s":1,"end_s":1,"tokens":[{"w":"a","lang":"l1"}]})"
            "\n"),
      CorpusError);
}

TEST_CASE("unknown speaker and malformed JSON are rejected") {
  CHECK_THROWS_AS(
      parse(R"({"speaker":"Z","start_s":0,"end_s":1,"tokens":[{"w":"a","lang":"l1"}]})"
            "\n"),
      CorpusError);
  CHECK_THROWS_AS(parse("{not json\n"), CorpusError);
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_conversation(empty, "x"), CorpusError);
}

TEST_CASE("corpus round trip through a directory") {
  TempDir dir("corpus_rt");
  Corpus corpus;
  corpus.conversations.push_back(conversation(
      "c1", {{"A", "hola:l1 okay:l2"}, {"B", "yeah:l2"}, {"A", "sí:l1"}}));
  auto c2 = conversation("c2", {{"A", "uh:und"}, {"B", "bueno:l1 so:l2"}});
  c2.utterances[1].manual_strategies = StrategySet{CswStrategy::kInsertional};
  c2.audio = AudioRef{"c2.wav", {{"A", 0}, {"B", 1}}};
  corpus.conversations.push_back(c2);
  corpus.metadata["source"] = "unit";
  write_corpus(corpus, dir.path());
  std::ofstream(dir.path() / "broken.jsonl") << "{oops\n";

  auto parsed = parse_corpus(dir.path());
  CHECK(parsed.corpus == corpus);
  REQUIRE(parsed.diagnostics.size() == 1);
  CHECK(parsed.diagnostics[0].line == 1);
}

TEST_CASE("parse_corpus on a missing directory throws") {
  CHECK_THROWS_AS(parse_corpus("/nonexistent/entrain/dir"), Error);
}

TEST_CASE("build_turns groups runs of one speaker") {
  auto c = conversation("t", {{"A", "a"}, {"A", "b"}, {"B", "c"}, {"A", "d"}});
  auto turns = build_turns(c);
  REQUIRE(turns.size() == 3);
  CHECK(turns[0].utterances.size() == 2);
  CHECK(turns[1].speaker_id == "B");
  CHECK(turns[2].first_utterance == 3);
  CHECK(turns[2].index == 2);

  CHECK(build_turns(conversation("t", {{"A", "a"}, {"A", "b"}, {"A", "c"}})).size() == 1);
  auto alt = build_turns(
      conversation("t", {{"A", "a"}, {"B", "b"}, {"A", "c"}, {"B", "d"}}));
  CHECK(alt.size() == 4);
  for (const auto& t : alt) CHECK(t.utterances.size() == 1);
}

TEST_CASE("filter_dyadic_csw keeps code-switched dyads only") {
  Corpus corpus;
  auto triad = conversation("triad", {{"A", "hola:l1 okay:l2"}});
  triad.speakers.push_back({"C", Gender::kFemale});
  corpus.conversations.push_back(triad);
  corpus.conversations.push_back(
      conversation("mono", {{"A", "hola:l1"}, {"B", "bueno:l1"}}));
  corpus.conversations.push_back(
      conversation("across", {{"A", "hola:l1"}, {"B", "okay:l2"}}));
  corpus.conversations.push_back(
      conversation("keep", {{"A", "hola:l1 okay:l2"}, {"B", "bueno:l1"}}));
  auto kept = filter_dyadic_csw(corpus);
  REQUIRE(kept.conversations.size() == 1);
  CHECK(kept.conversations[0].id == "keep");
}

TEST_CASE("filter_dyadic_csw on a corpus of known composition") {
  // 56 conversations: 39 code-switched dyads, 9 monolingual dyads, 8 triads.
  Corpus corpus;
  for (int i = 0; i < 56; ++i) {
    const std::string id = "c" + std::to_string(i);
    if (i < 39) {
      corpus.conversations.push_back(
          conversation(id, {{"A", "pero:l1 why:l2"}, {"B", "no:l1"}}));
    } else if (i < 48) {
      corpus.conversations.push_back(
          conversation(id, {{"A", "so:l2 why:l2"}, {"B", "no:l1"}}));
    } else {
      auto c = conversation(id, {{"A", "pero:l1 why:l2"}, {"B", "no:l1"}});
      c.speakers.push_back({"C", Gender::kMale});
      corpus.conversations.push_back(c);
    }
  }
  CHECK(filter_dyadic_csw(corpus).conversations.size() == 39);
}

TEST_CASE("text normalization") {
  CHECK(normalize_word("¿Qué?") == "qué");
  CHECK(normalize_word("Uh-huh,") == "uh-huh");
  CHECK(normalize_word("...") == "");
  CHECK(fold_case("ÁÑO") == "áño");
  CHECK(encode_utf8(decode_utf8("mañana")) == "mañana");
}

TEST_CASE("lexicon parsing and variants") {
  std::istringstream in("# cues\nuh-huh uhuh aha\nokay ok\n");
  auto lex = Lexicon::parse(in, "cues.txt");
  CHECK(lex.canonical("uhuh") == "uh-huh");
  CHECK(lex.canonical("ok") == "okay");
  CHECK(lex.members().size() == 2);
  CHECK_FALSE(lex.contains("no"));
  CHECK(default_cues().contains("uh-huh"));
  CHECK(default_cues().canonical("uhuh") == "uh-huh");
  CHECK(default_fillers().contains("um"));
}

TEST_CASE("CHAT transcripts convert to the interchange model") {
  const std::string chat =
      "@Begin\n"
      "@Languages:\tspa, eng\n"
      "@Participants:\tMAR Maria Adult, TOM Tom Adult\n"
      "@ID:\tspa, eng|bangor|MAR||female|||Adult|||\n"
      "@ID:\tspa, eng|bangor|TOM||male|||Adult|||\n"
      "@Media:\therring1, audio\n"
      "*MAR:\tyo creo que sí working@s:eng . \x15" "0_1500\x15\n"
      "*TOM:\tyeah@s:eng [=! laughs] okay@s:eng+spa . \x15" "1500_2300\x15\n"
      "*MAR:\tno bullet here .\n"
      "@End\n";
  std::istringstream in(chat);
  auto c = parse_chat(in, "herring1");
  REQUIRE(c.utterances.size() == 2);
  CHECK(c.utterances[0].start == doctest::Approx(0.0));
  CHECK(c.utterances[0].end == doctest::Approx(1.5));
  REQUIRE(c.utterances[0].tokens.size() == 5);
  CHECK(c.utterances[0].tokens[4].surface == "working");
  CHECK(c.utterances[0].tokens[4].lang == Lang::kL2);
  CHECK(c.utterances[0].tokens[0].lang == Lang::kL1);
  REQUIRE(c.utterances[1].tokens.size() == 2);
  CHECK(c.utterances[1].tokens[1].lang == Lang::kUndetermined);
  CHECK(c.find_speaker("MAR")->gender == Gender::kFemale);
  CHECK(c.find_speaker("TOM")->gender == Gender::kMale);
  REQUIRE(c.audio);
  CHECK(c.audio->path == "herring1.wav");
}
