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

#include "entrain/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "entrain/error.h"
#include "entrain/text.h"
#include "json.hpp"

namespace entrain {

using nlohmann::json;

std::string_view lang_code(Lang lang) {
  switch (lang) {
    case Lang::kL1:
      return "l1";
    case Lang::kL2:
      return "l2";
    case Lang::kUndetermined:
      break;
  }
  return "und";
}

std::optional<Lang> parse_lang(std::string_view code) {
  if (code == "l1") return Lang::kL1;
  if (code == "l2") return Lang::kL2;
  if (code == "und") return Lang::kUndetermined;
  return std::nullopt;
}

Lang opposite(Lang lang) {
  if (lang == Lang::kL1) return Lang::kL2;
  if (lang == Lang::kL2) return Lang::kL1;
  return Lang::kUndetermined;
}

std::string_view gender_code(Gender g) {
  switch (g) {
    case Gender::kFemale:
      return "F";
    case Gender::kMale:
      return "M";
    case Gender::kUnspecified:
      break;
  }
  return "U";
}

std::optional<Gender> parse_gender(std::string_view code) {
  const std::string c = fold_case(code);
  if (c == "f" || c == "female") return Gender::kFemale;
  if (c == "m" || c == "male") return Gender::kMale;
  if (c == "u" || c.empty() || c == "unspecified") return Gender::kUnspecified;
  return std::nullopt;
}

std::string_view strategy_code(CswStrategy s) {
  switch (s) {
    case CswStrategy::kInsertional:
      return "I";
    case CswStrategy::kAlternational:
      return "A";
    case CswStrategy::kOther:
      break;
  }
  return "O";
}

std::optional<CswStrategy> parse_strategy(std::string_view code) {
  if (code == "I") return CswStrategy::kInsertional;
  if (code == "A") return CswStrategy::kAlternational;
  if (code == "O") return CswStrategy::kOther;
  return std::nullopt;
}

std::size_t StrategySet::size() const {
  return static_cast<std::size_t>((bits_ & 1) + ((bits_ >> 1) & 1) +
                                  ((bits_ >> 2) & 1));
}

std::vector<CswStrategy> StrategySet::to_vector() const {
  std::vector<CswStrategy> out;
  for (auto s : {CswStrategy::kInsertional, CswStrategy::kAlternational,
                 CswStrategy::kOther}) {
    if (contains(s)) out.push_back(s);
  }
  return out;
}

std::string StrategySet::to_string() const {
  if (empty()) return "-1";
  std::string out;
  for (auto s : to_vector()) {
    if (!out.empty()) out += '+';
    out += strategy_code(s);
  }
  return out;
}

double Turn::speech_duration() const {
  double total = 0.0;
  for (const auto& u : utterances) total += u.duration();
  return total;
}

const Speaker* Conversation::find_speaker(std::string_view sid) const {
  for (const auto& s : speakers) {
    if (s.id == sid) return &s;
  }
  return nullptr;
}

const Speaker& Conversation::partner_of(std::string_view sid) const {
  if (speakers.size() != 2)
    throw ContractViolation("partner_of: conversation " + id +
                            " is not dyadic");
  if (speakers[0].id == sid) return speakers[1];
  if (speakers[1].id == sid) return speakers[0];
  throw ContractViolation("partner_of: unknown speaker " + std::string(sid));
}

const Conversation* Corpus::find(std::string_view cid) const {
  for (const auto& c : conversations) {
    if (c.id == cid) return &c;
  }
  return nullptr;
}

void sort_utterances(std::vector<Utterance>& utterances) {
  std::stable_sort(utterances.begin(), utterances.end(),
                   [](const Utterance& a, const Utterance& b) {
                     if (a.start != b.start) return a.start < b.start;
                     if (a.end != b.end) return a.end < b.end;
                     return a.speaker_id < b.speaker_id;
                   });
}

namespace {

const json& require(const json& obj, const char* key, const std::string& file,
                    std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw CorpusError(file, line, std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const json& obj, const char* key,
                           const std::string& file, std::size_t line) {
  const json& v = require(obj, key, file, line);
  if (!v.is_string() || v.get_ref<const std::string&>().empty())
    throw CorpusError(file, line,
                      std::string("field '") + key +
                          "' must be a non-empty string");
  return v.get<std::string>();
}

double require_number(const json& obj, const char* key,
                      const std::string& file, std::size_t line) {
  const json& v = require(obj, key, file, line);
  if (!v.is_number())
    throw CorpusError(file, line,
                      std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

StrategySet parse_strategy_list(const json& arr, const std::string& file,
                                std::size_t line) {
  if (!arr.is_array() || arr.empty())
    throw CorpusError(file, line, "strategies must be a non-empty array");
  StrategySet set;
  for (const auto& s : arr) {
    if (!s.is_string())
      throw CorpusError(file, line, "strategy labels must be strings");
    auto parsed = parse_strategy(s.get<std::string>());
    if (!parsed)
      throw CorpusError(file, line,
                        "unknown strategy label '" + s.get<std::string>() +
                            "' (expected I, A or O)");
    set.insert(*parsed);
  }
  return set;
}

void parse_header(const json& rec, Conversation& conv, const std::string& file,
                  std::size_t line) {
  conv.id = require_string(rec, "conversation_id", file, line);
  const json& speakers = require(rec, "speakers", file, line);
  if (!speakers.is_array() || speakers.empty())
    throw CorpusError(file, line, "speakers must be a non-empty array");
  std::set<std::string> seen;
  for (const auto& s : speakers) {
    if (!s.is_object())
      throw CorpusError(file, line, "speaker entries must be objects");
    Speaker spk;
    spk.id = require_string(s, "id", file, line);
    if (!seen.insert(spk.id).second)
      throw CorpusError(file, line, "duplicate speaker id '" + spk.id + "'");
    if (auto g = s.find("gender"); g != s.end()) {
      if (!g->is_string())
        throw CorpusError(file, line, "gender must be a string");
      auto parsed = parse_gender(g->get<std::string>());
      if (!parsed)
        throw CorpusError(file, line,
                          "unknown gender '" + g->get<std::string>() + "'");
      spk.gender = *parsed;
    }
    conv.speakers.push_back(std::move(spk));
  }
  if (auto a = rec.find("audio"); a != rec.end() && !a->is_null()) {
    if (!a->is_object())
      throw CorpusError(file, line, "audio must be an object");
    AudioRef ref;
    ref.path = require_string(*a, "path", file, line);
    if (auto cm = a->find("channel_map"); cm != a->end()) {
      if (!cm->is_object())
        throw CorpusError(file, line, "channel_map must be an object");
      for (const auto& [spk, ch] : cm->items()) {
        if (!ch.is_number_integer() || ch.get<int>() < 0)
          throw CorpusError(file, line,
                            "channel for speaker '" + spk +
                                "' must be a non-negative integer");
        if (!seen.count(spk))
          throw CorpusError(file, line,
                            "channel_map names unknown speaker '" + spk + "'");
        ref.channel_map[spk] = ch.get<int>();
      }
    }
    conv.audio = std::move(ref);
  }
}

Utterance parse_utterance(const json& rec, const Conversation& conv,
                          const std::string& file, std::size_t line) {
  Utterance utt;
  utt.speaker_id = require_string(rec, "speaker", file, line);
  if (!conv.find_speaker(utt.speaker_id))
    throw CorpusError(file, line,
                      "utterance speaker '" + utt.speaker_id +
                          "' is not declared in the header");
  utt.start = require_number(rec, "start_s", file, line);
  utt.end = require_number(rec, "end_s", file, line);
  if (utt.start < 0.0)
    throw CorpusError(file, line, "start_s must be >= 0");
  if (!(utt.end > utt.start))
    throw CorpusError(file, line, "utterance end_s must be greater than start_s");
  const json& tokens = require(rec, "tokens", file, line);
  if (!tokens.is_array() || tokens.empty())
    throw CorpusError(file, line, "tokens must be a non-empty array");
  for (const auto& t : tokens) {
    if (!t.is_object())
      throw CorpusError(file, line, "token entries must be objects");
    Token tok;
    tok.surface = require_string(t, "w", file, line);
    const std::string code = require_string(t, "lang", file, line);
    auto lang = parse_lang(code);
    if (!lang)
      throw CorpusError(file, line,
                        "invalid lang tag '" + code +
                            "' (expected l1, l2 or und)");
    tok.lang = *lang;
    utt.tokens.push_back(std::move(tok));
  }
  if (auto m = rec.find("csw_manual"); m != rec.end() && !m->is_null())
    utt.manual_strategies = parse_strategy_list(*m, file, line);
  return utt;
}

}  // namespace

Conversation parse_conversation(std::istream& in,
                                const std::string& source_name) {
  Conversation conv;
  bool have_header = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (trim(raw).empty()) continue;
    json rec;
    try {
      rec = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw CorpusError(source_name, line_no,
                        std::string("malformed record: ") + e.what());
    }
    if (!rec.is_object())
      throw CorpusError(source_name, line_no, "record must be an object");
    if (!have_header) {
      parse_header(rec, conv, source_name, line_no);
      have_header = true;
      continue;
    }
    conv.utterances.push_back(
        parse_utterance(rec, conv, source_name, line_no));
  }
  if (!have_header) throw CorpusError(source_name, 0, "missing header record");
  sort_utterances(conv.utterances);
  return conv;
}

Conversation read_conversation_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  Conversation conv = parse_conversation(in, path.string());
  conv.source = path;
  return conv;
}

ParseResult parse_corpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw Error("corpus path is not a readable directory: " + dir.string());
  std::vector<fs::path> files;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end;
       it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".jsonl")
      files.push_back(it->path());
  }
  if (ec) throw Error("cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());

  ParseResult result;
  std::set<std::string> ids;
  for (const auto& f : files) {
    try {
      Conversation conv = read_conversation_file(f);
      if (!ids.insert(conv.id).second) {
        result.diagnostics.push_back(
            {f.string(), 1, "duplicate conversation id '" + conv.id + "'"});
        continue;
      }
      result.corpus.conversations.push_back(std::move(conv));
    } catch (const CorpusError& e) {
      result.diagnostics.push_back({e.file(), e.line(), e.detail()});
    } catch (const Error& e) {
      result.diagnostics.push_back({f.string(), 0, e.what()});
    }
  }

  const fs::path meta = dir / "metadata.json";
  if (fs::exists(meta)) {
    std::ifstream in(meta);
    try {
      json m = json::parse(in);
      for (const auto& [k, v] : m.items()) {
        result.corpus.metadata[k] = v.is_string() ? v.get<std::string>()
                                                  : v.dump();
      }
    } catch (const json::exception& e) {
      result.diagnostics.push_back(
          {meta.string(), 0, std::string("bad metadata: ") + e.what()});
    }
  }
  return result;
}

void write_conversation(const Conversation& conv, std::ostream& out) {
  json header;
  header["conversation_id"] = conv.id;
  json speakers = json::array();
  for (const auto& s : conv.speakers) {
    speakers.push_back({{"id", s.id}, {"gender", gender_code(s.gender)}});
  }
  header["speakers"] = std::move(speakers);
  if (conv.audio) {
    json cm = json::object();
    for (const auto& [spk, ch] : conv.audio->channel_map) cm[spk] = ch;
    header["audio"] = {{"path", conv.audio->path}, {"channel_map", cm}};
  }
  out << header.dump() << '\n';
  for (const auto& u : conv.utterances) {
    json rec;
    rec["speaker"] = u.speaker_id;
    rec["start_s"] = u.start;
    rec["end_s"] = u.end;
    json toks = json::array();
    for (const auto& t : u.tokens) {
      toks.push_back({{"w", t.surface}, {"lang", lang_code(t.lang)}});
    }
    rec["tokens"] = std::move(toks);
    if (u.manual_strategies) {
      json labels = json::array();
      for (auto s : u.manual_strategies->to_vector())
        labels.push_back(strategy_code(s));
      rec["csw_manual"] = std::move(labels);
    }
    out << rec.dump() << '\n';
  }
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& conv : corpus.conversations) {
    std::ofstream out(dir / (conv.id + ".jsonl"));
    if (!out) throw Error("cannot write into " + dir.string());
    write_conversation(conv, out);
  }
  if (!corpus.metadata.empty()) {
    json m(corpus.metadata);
    std::ofstream(dir / "metadata.json") << m.dump(2) << '\n';
  }
}

std::vector<Turn> build_turns(const Conversation& conv) {
  std::vector<Turn> turns;
  for (std::size_t i = 0; i < conv.utterances.size(); ++i) {
    const Utterance& u = conv.utterances[i];
    if (turns.empty() || turns.back().speaker_id != u.speaker_id) {
      Turn t;
      t.speaker_id = u.speaker_id;
      t.index = turns.size();
      t.first_utterance = i;
      turns.push_back(std::move(t));
    }
    turns.back().utterances.push_back(u);
  }
  return turns;
}

bool is_code_switched(const Utterance& utt) {
  bool l1 = false;
  bool l2 = false;
  for (const auto& t : utt.tokens) {
    l1 |= t.lang == Lang::kL1;
    l2 |= t.lang == Lang::kL2;
  }
  return l1 && l2;
}

Corpus filter_dyadic_csw(const Corpus& corpus) {
  Corpus out;
  out.metadata = corpus.metadata;
  for (const auto& conv : corpus.conversations) {
    if (!conv.is_dyadic()) continue;
    if (std::any_of(conv.utterances.begin(), conv.utterances.end(),
                    is_code_switched))
      out.conversations.push_back(conv);
  }
  return out;
}

}  // namespace entrain
