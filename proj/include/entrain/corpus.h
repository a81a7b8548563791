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

#ifndef ENTRAIN_CORPUS_H_
#define ENTRAIN_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace entrain {

// Word-level language tag. kL1/kL2 are the two languages of the corpus; the
// tools assume kL2 is English where orthography matters (syllable counting).
enum class Lang { kL1, kL2, kUndetermined };

std::string_view lang_code(Lang lang);  // "l1", "l2", "und"
std::optional<Lang> parse_lang(std::string_view code);
Lang opposite(Lang lang);

enum class Gender { kFemale, kMale, kUnspecified };

std::string_view gender_code(Gender g);  // "F", "M", "U"
std::optional<Gender> parse_gender(std::string_view code);

enum class CswStrategy { kInsertional, kAlternational, kOther };

std::string_view strategy_code(CswStrategy s);  // "I", "A", "O"
std::optional<CswStrategy> parse_strategy(std::string_view code);

// A subset of {I, A, O}. The empty set doubles as the monolingual marker.
class StrategySet {
 public:
  StrategySet() = default;
  StrategySet(std::initializer_list<CswStrategy> strategies) {
    for (auto s : strategies) insert(s);
  }

  void insert(CswStrategy s) { bits_ |= bit(s); }
  bool contains(CswStrategy s) const { return (bits_ & bit(s)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const;
  std::vector<CswStrategy> to_vector() const;
  // "I", "I+O", ... or "-1" for the monolingual marker.
  std::string to_string() const;

  bool operator==(const StrategySet&) const = default;

 private:
  static std::uint8_t bit(CswStrategy s) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(s));
  }
  std::uint8_t bits_ = 0;
};

struct Token {
  std::string surface;
  Lang lang = Lang::kUndetermined;

  bool operator==(const Token&) const = default;
};

struct Utterance {
  std::string speaker_id;
  double start = 0.0;  // seconds
  double end = 0.0;
  std::vector<Token> tokens;
  // Manual strategy annotation; replaces the heuristic classifier when set.
  std::optional<StrategySet> manual_strategies;

  double duration() const { return end - start; }
  bool operator==(const Utterance&) const = default;
};

struct Turn {
  std::string speaker_id;
  std::size_t index = 0;            // position in the conversation's turns
  std::size_t first_utterance = 0;  // index into Conversation::utterances
  std::vector<Utterance> utterances;

  double start() const { return utterances.front().start; }
  double end() const { return utterances.back().end; }
  double speech_duration() const;
};

struct Speaker {
  std::string id;
  Gender gender = Gender::kUnspecified;

  bool operator==(const Speaker&) const = default;
};

struct AudioRef {
  std::string path;  // relative paths resolve against the conversation file
  std::map<std::string, int> channel_map;  // speaker id -> channel

  bool operator==(const AudioRef&) const = default;
};

struct Conversation {
  std::string id;
  std::vector<Speaker> speakers;
  std::vector<Utterance> utterances;  // sorted by (start, end, speaker)
  std::optional<AudioRef> audio;
  std::filesystem::path source;  // file it was read from, if any

  const Speaker* find_speaker(std::string_view id) const;
  bool is_dyadic() const { return speakers.size() == 2; }
  // The other member of a dyad.
  const Speaker& partner_of(std::string_view id) const;

  bool operator==(const Conversation& o) const {
    return id == o.id && speakers == o.speakers && utterances == o.utterances &&
           audio == o.audio;
  }
};

struct Corpus {
  std::vector<Conversation> conversations;
  std::map<std::string, std::string> metadata;

  const Conversation* find(std::string_view id) const;
  bool operator==(const Corpus&) const = default;
};

struct Diagnostic {
  std::string file;
  std::size_t line = 0;
  std::string message;
};

struct ParseResult {
  Corpus corpus;
  std::vector<Diagnostic> diagnostics;  // one per rejected file
};

// Orders utterances by start time, then end time, then speaker id.
void sort_utterances(std::vector<Utterance>& utterances);

// Parses one conversation in the line-delimited interchange format. Throws
// CorpusError naming `source_name` and the offending line.
Conversation parse_conversation(std::istream& in,
                                const std::string& source_name);
Conversation read_conversation_file(const std::filesystem::path& path);

// Reads every *.jsonl file of `dir` (sorted by name). Files that fail
// validation are reported in the diagnostics and left out of the corpus.
// An optional metadata.json holding a flat string map fills Corpus::metadata.
// Throws Error when `dir` cannot be read.
ParseResult parse_corpus(const std::filesystem::path& dir);

void write_conversation(const Conversation& conv, std::ostream& out);
// One <conversation id>.jsonl per conversation, plus metadata.json if any.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

// Maximal runs of same-speaker utterances.
std::vector<Turn> build_turns(const Conversation& conv);

bool is_code_switched(const Utterance& utt);

// Keeps dyads containing at least one utterance with both l1 and l2 tokens.
Corpus filter_dyadic_csw(const Corpus& corpus);

}  // namespace entrain

#endif  // ENTRAIN_CORPUS_H_
