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

#include "entrain/lexical.h"

#include <cmath>
#include <utility>

#include "entrain/error.h"

namespace entrain {

namespace {

constexpr const char* kPplIncl = "ppl_incl_oov";
constexpr const char* kPplExcl = "ppl_excl_oov";

void require_nonpartners(const std::vector<Side>& sides) {
  for (std::size_t i = 1; i < sides.size(); ++i) {
    if (sides[i].conversation_id != sides[0].conversation_id) return;
  }
  throw Error("no non-partners");
}

const Side* partner_side(const std::vector<Side>& sides, const Side& s) {
  for (const auto& o : sides) {
    if (o.conversation_id == s.conversation_id && o.speaker_id != s.speaker_id)
      return &o;
  }
  return nullptr;
}

}  // namespace

double class_entrainment(const SpeakerCounts& a, const SpeakerCounts& b,
                         const std::set<std::string>& members) {
  if (a.all <= 0 || b.all <= 0)
    throw DegenerateError("class_entrainment: speaker with no words");
  double sum = 0.0;
  for (const auto& w : members) {
    auto ia = a.counts.find(w);
    auto ib = b.counts.find(w);
    const double ca = ia == a.counts.end() ? 0.0 : static_cast<double>(ia->second);
    const double cb = ib == b.counts.end() ? 0.0 : static_cast<double>(ib->second);
    sum += std::abs(ca / static_cast<double>(a.all) -
                    cb / static_cast<double>(b.all));
  }
  return -sum;
}

std::vector<Side> collect_sides(const Corpus& corpus, const Lexicon& variants) {
  std::vector<Side> out;
  for (const auto& conv : corpus.conversations) {
    if (!conv.is_dyadic()) continue;
    for (const auto& sp : conv.speakers) {
      Side s;
      s.conversation_id = conv.id;
      s.speaker_id = sp.id;
      s.text = speaker_sentences(conv, sp.id, variants);
      s.counts = count_words(s.text);
      if (s.counts.all > 0) out.push_back(std::move(s));
    }
  }
  return out;
}

double SideScore::baseline() const { return mean(nonpartner); }

std::vector<std::string> lexical_feature_keys() {
  std::vector<std::string> keys;
  for (auto k : all_word_classes()) keys.emplace_back(word_class_key(k));
  keys.emplace_back(kPplIncl);
  keys.emplace_back(kPplExcl);
  return keys;
}

std::string lexical_feature_label(const std::string& key) {
  if (key == kPplIncl) return "Perplexity (incl. OOV)";
  if (key == kPplExcl) return "Perplexity (excl. OOV)";
  if (auto k = parse_word_class(key)) return std::string(word_class_label(*k));
  return key;
}

bool lower_is_entrained(const std::string& key) {
  return key == kPplIncl || key == kPplExcl;
}

std::vector<SideScore> nonpartner_baseline(const std::vector<Side>& sides,
                                           const WordClassTable& table,
                                           WordClassKind kind) {
  require_nonpartners(sides);
  std::vector<SideScore> out;
  for (const auto& s : sides) {
    const Side* p = partner_side(sides, s);
    if (p == nullptr) continue;
    const auto& members = table.get(kind, s.conversation_id).members;
    SideScore sc;
    sc.conversation_id = s.conversation_id;
    sc.speaker_id = s.speaker_id;
    sc.partner = class_entrainment(s.counts, p->counts, members);
    for (const auto& o : sides) {
      if (o.conversation_id == s.conversation_id) continue;
      sc.nonpartner.push_back(class_entrainment(s.counts, o.counts, members));
    }
    out.push_back(std::move(sc));
  }
  return out;
}

std::vector<SideScore> perplexity_scores(const std::vector<Side>& sides,
                                         bool include_oov,
                                         std::vector<std::string>& diagnostics,
                                         const TrainOptions& opts) {
  require_nonpartners(sides);
  std::vector<SideScore> out;
  for (const auto& s : sides) {
    const Side* p = partner_side(sides, s);
    if (p == nullptr) continue;
    const TrigramLm lm = TrigramLm::train(s.text, opts);
    SideScore sc;
    sc.conversation_id = s.conversation_id;
    sc.speaker_id = s.speaker_id;
    try {
      sc.partner = perplexity(lm, p->text, include_oov).perplexity;
    } catch (const DegenerateError& e) {
      diagnostics.push_back(s.conversation_id + "/" + s.speaker_id +
                            ": partner not scorable: " + e.what());
      continue;
    }
    for (const auto& o : sides) {
      if (o.conversation_id == s.conversation_id) continue;
      try {
        sc.nonpartner.push_back(perplexity(lm, o.text, include_oov).perplexity);
      } catch (const DegenerateError& e) {
        diagnostics.push_back(s.conversation_id + "/" + s.speaker_id + " on " +
                              o.conversation_id + "/" + o.speaker_id + ": " +
                              e.what());
      }
    }
    if (sc.nonpartner.empty()) {
      diagnostics.push_back(s.conversation_id + "/" + s.speaker_id +
                            ": no scorable non-partners");
      continue;
    }
    out.push_back(std::move(sc));
  }
  return out;
}

LmEntrainment lm_entrainment(const Conversation& conv, const Lexicon& variants,
                             bool include_oov, const TrainOptions& opts) {
  if (!conv.is_dyadic())
    throw ContractViolation("lm_entrainment: conversation is not a dyad");
  LmEntrainment r;
  r.speaker_a = conv.speakers[0].id;
  r.speaker_b = conv.speakers[1].id;
  const auto ta = speaker_sentences(conv, r.speaker_a, variants);
  const auto tb = speaker_sentences(conv, r.speaker_b, variants);
  if (ta.empty() || tb.empty())
    throw Error("lm_entrainment: speaker with empty transcript in " + conv.id);
  const TrigramLm la = TrigramLm::train(ta, opts);
  const TrigramLm lb = TrigramLm::train(tb, opts);
  r.a_on_b = -perplexity(la, tb, include_oov).perplexity;
  r.b_on_a = -perplexity(lb, ta, include_oov).perplexity;
  return r;
}

LexicalMeasure summarize_lexical(const std::string& feature,
                                 std::vector<SideScore> sides, double alpha) {
  LexicalMeasure m;
  m.feature = feature;
  m.sides = std::move(sides);
  const bool lower = lower_is_entrained(feature);
  auto favourable = [&](const StatResult& t) {
    return t.p < alpha && (lower ? t.statistic < 0.0 : t.statistic > 0.0);
  };

  std::vector<double> partner;
  std::vector<double> baseline;
  for (const auto& s : m.sides) {
    partner.push_back(s.partner);
    baseline.push_back(s.baseline());
  }
  try {
    m.corpus_test = paired_ttest(partner, baseline);
    m.corpus_entraining = favourable(*m.corpus_test);
  } catch (const DegenerateError& e) {
    m.diagnostics.push_back(feature + ": corpus test: " + e.what());
  }

  std::map<std::string, std::vector<const SideScore*>> by_conv;
  for (const auto& s : m.sides) by_conv[s.conversation_id].push_back(&s);
  for (const auto& [conv, sides_of] : by_conv) {
    ConversationVerdict v;
    std::vector<std::pair<double, std::vector<double>>> groups;
    for (const auto* s : sides_of) {
      v.mean_difference += s->partner - s->baseline();
      groups.emplace_back(s->partner, s->nonpartner);
    }
    v.mean_difference /= static_cast<double>(sides_of.size());
    try {
      v.test = rank_test(groups, lower);
      v.entraining = v.test->p < alpha;
    } catch (const DegenerateError& e) {
      v.note = e.what();
    }
    m.conversations[conv] = std::move(v);
  }
  return m;
}

std::vector<LexicalMeasure> run_lexical(const Corpus& corpus,
                                        const Lexicon& cues,
                                        const Lexicon& fillers, double alpha) {
  const Lexicon variants = cues.merged_with(fillers);
  const WordClassTable table = build_word_classes(corpus, cues, fillers);
  const std::vector<Side> sides = collect_sides(corpus, variants);
  std::vector<LexicalMeasure> out;
  for (auto k : all_word_classes()) {
    auto m = summarize_lexical(std::string(word_class_key(k)),
                               nonpartner_baseline(sides, table, k), alpha);
    m.diagnostics.insert(m.diagnostics.begin(), table.warnings.begin(),
                         table.warnings.end());
    out.push_back(std::move(m));
  }
  for (bool incl : {true, false}) {
    std::vector<std::string> diag;
    auto scores = perplexity_scores(sides, incl, diag);
    auto m = summarize_lexical(incl ? kPplIncl : kPplExcl, std::move(scores),
                               alpha);
    m.diagnostics.insert(m.diagnostics.begin(), diag.begin(), diag.end());
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace entrain
