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

#include "entrain/bangor.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "entrain/error.h"
#include "entrain/text.h"

namespace entrain {

namespace {

constexpr char kBullet = '\x15';

struct Participant {
  std::string code;
  Gender gender = Gender::kUnspecified;
};

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t b = 0;
  while (true) {
    const std::size_t e = s.find(sep, b);
    out.emplace_back(s.substr(b, e == std::string_view::npos ? e : e - b));
    if (e == std::string_view::npos) break;
    b = e + 1;
  }
  return out;
}

// Removes [..] annotations and returns the time bullet, if any.
std::string strip_annotations(std::string_view text, double* start,
                              double* end) {
  std::string out;
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == kBullet) {
      const std::size_t close = text.find(kBullet, i + 1);
      if (close == std::string_view::npos) break;
      auto parts = split(text.substr(i + 1, close - i - 1), '_');
      if (parts.size() == 2) {
        try {
          *start = std::stod(parts[0]) / 1000.0;
          *end = std::stod(parts[1]) / 1000.0;
        } catch (const std::exception&) {
        }
      }
      i = close;
      continue;
    }
    if (c == '[') {
      ++depth;
      continue;
    }
    if (c == ']') {
      if (depth > 0) --depth;
      continue;
    }
    if (depth == 0) out.push_back(c);
  }
  return out;
}

bool is_dropped(std::string_view w) {
  if (w.empty()) return true;
  if (w == "xxx" || w == "yyy" || w == "www") return true;
  if (w.starts_with("&=") || w.starts_with("&+") || w.starts_with("0"))
    return true;
  if (w.starts_with("+") || w.starts_with("(.")) return true;
  return false;
}

std::string clean_word(std::string w) {
  if (w.starts_with("&-")) w = w.substr(2);
  std::string out;
  for (char c : w) {
    if (c == '(' || c == ')' || c == '<' || c == '>' || c == ':' ||
        c == '^' || c == '/' || c == '"')
      continue;
    out.push_back(c);
  }
  if (normalize_word(out).empty()) return {};
  return out;
}

}  // namespace

Conversation parse_chat(std::istream& in, const std::string& conversation_id,
                        const BangorOptions& opts) {
  Conversation conv;
  conv.id = conversation_id;
  std::string default_lang;
  std::map<std::string, Participant> participants;
  std::string media;

  // Join continuation lines (leading tab) onto their tier.
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (!raw.empty() && raw[0] == '\t' && !lines.empty()) {
      lines.back().second += ' ';
      lines.back().second += raw.substr(1);
    } else {
      lines.emplace_back(line_no, raw);
    }
  }

  for (const auto& [no, line] : lines) {
    if (line.starts_with("@Languages:")) {
      auto langs = split(trim(line.substr(11)), ',');
      if (!langs.empty()) default_lang = std::string(trim(langs[0]));
    } else if (line.starts_with("@ID:")) {
      auto fields = split(trim(line.substr(4)), '|');
      if (fields.size() > 4) {
        Participant p;
        p.code = std::string(trim(fields[2]));
        p.gender = parse_gender(trim(fields[4])).value_or(Gender::kUnspecified);
        participants[p.code] = p;
      }
    } else if (line.starts_with("@Participants:")) {
      for (const auto& entry : split(line.substr(14), ',')) {
        auto words = split_whitespace(entry);
        if (!words.empty() && !participants.count(words[0]))
          participants[words[0]] = Participant{words[0], Gender::kUnspecified};
      }
    } else if (line.starts_with("@Media:")) {
      auto fields = split(trim(line.substr(7)), ',');
      if (!fields.empty()) media = std::string(trim(fields[0]));
    } else if (line.starts_with("*")) {
      const std::size_t colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string code = line.substr(1, colon - 1);
      double start = -1.0;
      double end = -1.0;
      const std::string body =
          strip_annotations(std::string_view(line).substr(colon + 1), &start,
                            &end);
      if (start < 0.0 || !(end > start)) continue;
      Utterance utt;
      utt.speaker_id = code;
      utt.start = start;
      utt.end = end;
      for (auto& w : split_whitespace(body)) {
        if (is_dropped(w)) continue;
        Lang lang = default_lang == opts.l2 ? Lang::kL2 : Lang::kL1;
        if (default_lang != opts.l1 && default_lang != opts.l2)
          lang = Lang::kUndetermined;
        const std::size_t at = w.find("@s");
        std::string word = w;
        if (at != std::string::npos) {
          std::string tag = w.substr(at + 2);
          word = w.substr(0, at);
          if (!tag.empty() && tag[0] == ':') tag = tag.substr(1);
          if (tag.find('+') != std::string::npos ||
              tag.find('&') != std::string::npos) {
            lang = Lang::kUndetermined;
          } else if (tag == opts.l1) {
            lang = Lang::kL1;
          } else if (tag == opts.l2) {
            lang = Lang::kL2;
          } else if (tag.empty()) {
            // Bare @s marks the non-default language of a bilingual file.
            lang = opposite(lang);
          } else {
            lang = Lang::kUndetermined;
          }
        } else if (const std::size_t at2 = w.find('@');
                   at2 != std::string::npos) {
          word = w.substr(0, at2);
        }
        word = clean_word(word);
        if (word.empty()) continue;
        utt.tokens.push_back({word, lang});
      }
      if (utt.tokens.empty()) continue;
      conv.utterances.push_back(std::move(utt));
    }
  }

  std::set<std::string> speaking;
  for (const auto& u : conv.utterances) speaking.insert(u.speaker_id);
  for (const auto& code : speaking) {
    auto it = participants.find(code);
    conv.speakers.push_back(
        {code, it == participants.end() ? Gender::kUnspecified
                                        : it->second.gender});
  }
  if (!media.empty()) {
    AudioRef ref;
    ref.path = media + opts.audio_extension;
    for (const auto& s : conv.speakers) ref.channel_map[s.id] = 0;
    conv.audio = std::move(ref);
  }
  sort_utterances(conv.utterances);
  return conv;
}

ParseResult ingest_bangor(const std::filesystem::path& dir,
                          const BangorOptions& opts) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw Error("not a readable directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".cha")
      files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  ParseResult result;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) {
      result.diagnostics.push_back({f.string(), 0, "cannot open"});
      continue;
    }
    Conversation conv = parse_chat(in, f.stem().string(), opts);
    if (conv.utterances.empty()) {
      result.diagnostics.push_back(
          {f.string(), 0, "no time-aligned utterances"});
      continue;
    }
    result.corpus.conversations.push_back(std::move(conv));
  }
  result.corpus.metadata["source"] = "bangor-miami";
  result.corpus.metadata["l1"] = opts.l1;
  result.corpus.metadata["l2"] = opts.l2;
  return result;
}

}  // namespace entrain
