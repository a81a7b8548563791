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

#include "entrain/csw.h"

#include <fstream>
#include <sstream>

#include "entrain/error.h"
#include "entrain/text.h"
#include "json.hpp"

namespace entrain {

std::string_view label_source_name(LabelSource s) {
  switch (s) {
    case LabelSource::kHeuristic:
      return "heuristic";
    case LabelSource::kManual:
      return "manual";
    case LabelSource::kNone:
      break;
  }
  return "none";
}

namespace {

struct Span {
  Lang lang;
  std::size_t begin;
  std::size_t end;  // exclusive
  std::size_t size() const { return end - begin; }
};

std::vector<Span> language_spans(const std::vector<Token>& tokens) {
  std::vector<Span> spans;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Lang l = tokens[i].lang;
    if (l == Lang::kUndetermined) continue;
    if (!spans.empty() && spans.back().lang == l && spans.back().end == i) {
      spans.back().end = i + 1;
    } else {
      spans.push_back({l, i, i + 1});
    }
  }
  return spans;
}

std::optional<Lang> majority(const std::vector<Token>& tokens,
                             std::size_t skip) {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::optional<Lang> first;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i == skip) continue;
    const Lang l = tokens[i].lang;
    if (l == Lang::kUndetermined) continue;
    if (!first) first = l;
    (l == Lang::kL1 ? n1 : n2)++;
  }
  if (!first) return std::nullopt;
  if (n1 != n2) return n1 > n2 ? Lang::kL1 : Lang::kL2;
  return first;
}

bool in_lexicon(const Token& t, const Lexicon& lex) {
  return lex.contains(normalize_word(t.surface));
}

}  // namespace

Lang matrix_language(const Utterance& utt) {
  auto m = majority(utt.tokens, utt.tokens.size());
  if (!m) throw Error("no determinable language");
  return *m;
}

StrategySet classify_strategy(const Utterance& utt,
                              const Lexicon& edge_words) {
  if (!is_code_switched(utt))
    throw ContractViolation("classify_strategy: utterance is monolingual");
  const auto& toks = utt.tokens;
  const std::size_t n = toks.size();
  const Lang matrix = matrix_language(utt);
  StrategySet out;

  for (std::size_t edge : {std::size_t{0}, n - 1}) {
    const Token& t = toks[edge];
    if (t.lang == Lang::kUndetermined || !in_lexicon(t, edge_words)) continue;
    auto rest = majority(toks, edge);
    if (rest && t.lang == opposite(*rest)) out.insert(CswStrategy::kOther);
  }

  const auto spans = language_spans(toks);
  bool long_l1 = false;
  bool long_l2 = false;
  std::size_t longest_foreign = 0;
  for (const auto& s : spans) {
    if (s.size() >= 3) (s.lang == Lang::kL1 ? long_l1 : long_l2) = true;
    if (s.lang == matrix) continue;
    longest_foreign = std::max(longest_foreign, s.size());
    if (s.size() > 2) continue;
    const bool at_edge = s.begin == 0 || s.end == n;
    bool all_lexicon = true;
    for (std::size_t i = s.begin; i < s.end; ++i)
      all_lexicon &= in_lexicon(toks[i], edge_words);
    if (!(at_edge && all_lexicon)) out.insert(CswStrategy::kInsertional);
  }
  if (long_l1 && long_l2) out.insert(CswStrategy::kAlternational);

  // No rule fired (e.g. spans fragmented by und tokens): fall back on the
  // length of the longest switched span.
  if (out.empty()) {
    out.insert(longest_foreign >= 3 ? CswStrategy::kAlternational
                                    : CswStrategy::kInsertional);
  }
  return out;
}

CswFeatures csw_features(const Utterance& utt, const Lexicon& edge_words) {
  const Lang matrix = matrix_language(utt);
  CswFeatures f;
  f.presence = is_code_switched(utt);
  std::size_t switched = 0;
  for (const auto& t : utt.tokens) switched += t.lang == opposite(matrix);
  f.ratio = static_cast<double>(switched) /
            static_cast<double>(utt.tokens.size());
  if (f.presence) {
    if (utt.manual_strategies) {
      f.strategies = *utt.manual_strategies;
      f.source = LabelSource::kManual;
    } else {
      f.strategies = classify_strategy(utt, edge_words);
      f.source = LabelSource::kHeuristic;
    }
  }
  return f;
}

std::vector<CswFeatures> conversation_csw(const Conversation& conv,
                                          const Lexicon& edge_words) {
  std::vector<CswFeatures> out;
  out.reserve(conv.utterances.size());
  for (const auto& u : conv.utterances) {
    bool determinable = false;
    for (const auto& t : u.tokens) determinable |= t.lang != Lang::kUndetermined;
    out.push_back(determinable ? csw_features(u, edge_words) : CswFeatures{});
  }
  return out;
}

std::vector<StrategyOverride> parse_overrides(std::istream& in,
                                              const std::string& source_name) {
  using nlohmann::json;
  std::vector<StrategyOverride> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw CorpusError(source_name, line_no,
                        std::string("malformed record: ") + e.what());
    }
    StrategyOverride o;
    o.line = line_no;
    if (!rec.contains("conversation_id") || !rec["conversation_id"].is_string())
      throw CorpusError(source_name, line_no, "missing conversation_id");
    o.conversation_id = rec["conversation_id"].get<std::string>();
    if (!rec.contains("utterance_index") ||
        !rec["utterance_index"].is_number_unsigned())
      throw CorpusError(source_name, line_no,
                        "utterance_index must be a non-negative integer");
    o.utterance_index = rec["utterance_index"].get<std::size_t>();
    if (!rec.contains("strategies") || !rec["strategies"].is_array() ||
        rec["strategies"].empty())
      throw CorpusError(source_name, line_no,
                        "strategies must be a non-empty array");
    for (const auto& s : rec["strategies"]) {
      auto parsed = s.is_string() ? parse_strategy(s.get<std::string>())
                                  : std::nullopt;
      if (!parsed)
        throw CorpusError(source_name, line_no,
                          "unknown strategy label " + s.dump());
      o.strategies.insert(*parsed);
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<StrategyOverride> read_overrides(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open override file " + p.string());
  return parse_overrides(in, p.string());
}

Corpus apply_overrides(Corpus corpus,
                       const std::vector<StrategyOverride>& overrides) {
  std::vector<std::string> problems;
  for (const auto& o : overrides) {
    Conversation* conv = nullptr;
    for (auto& c : corpus.conversations) {
      if (c.id == o.conversation_id) conv = &c;
    }
    std::string where = "line " + std::to_string(o.line) + " (" +
                        o.conversation_id + "#" +
                        std::to_string(o.utterance_index) + ")";
    if (!conv) {
      problems.push_back(where + ": unknown conversation");
      continue;
    }
    if (o.utterance_index >= conv->utterances.size()) {
      problems.push_back(where + ": unknown utterance");
      continue;
    }
    Utterance& u = conv->utterances[o.utterance_index];
    if (!is_code_switched(u)) {
      problems.push_back(where + ": utterance is monolingual");
      continue;
    }
    u.manual_strategies = o.strategies;
  }
  if (!problems.empty()) {
    std::string msg = "invalid strategy overrides:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw CorpusError("overrides", 0, msg);
  }
  return corpus;
}

double CswStats::pct_monolingual() const {
  return utterances ? 100.0 * static_cast<double>(monolingual) /
                          static_cast<double>(utterances)
                    : 0.0;
}

namespace {
double share(std::size_t k, std::size_t n) {
  return n ? 100.0 * static_cast<double>(k) / static_cast<double>(n) : 0.0;
}
}  // namespace

double CswStats::pct_insertional() const {
  return share(insertional, code_switched);
}
double CswStats::pct_alternational() const {
  return share(alternational, code_switched);
}
double CswStats::pct_other() const { return share(other, code_switched); }

CswStats corpus_csw_stats(const Corpus& corpus, const Lexicon& edge_words) {
  CswStats st;
  for (const auto& conv : corpus.conversations) {
    for (const auto& f : conversation_csw(conv, edge_words)) {
      ++st.utterances;
      if (!f.presence) {
        ++st.monolingual;
        continue;
      }
      ++st.code_switched;
      st.insertional += f.strategies.contains(CswStrategy::kInsertional);
      st.alternational += f.strategies.contains(CswStrategy::kAlternational);
      st.other += f.strategies.contains(CswStrategy::kOther);
      st.manual_labels += f.source == LabelSource::kManual;
    }
  }
  if (st.utterances == 0) throw Error("corpus has no utterances");
  return st;
}

}  // namespace entrain
