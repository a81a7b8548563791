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

#include "entrain/pipeline.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>
#include <utility>

#include <spdlog/spdlog.h>

#include "entrain/error.h"
#include "entrain/lexical.h"
#include "entrain/lexicon.h"
#include "entrain/rng.h"
#include "entrain/stats.h"
#include "entrain/wav.h"

namespace entrain {

namespace {

constexpr const char* kScopeTurn = "turn";
constexpr const char* kScopeConv = "conversation";
constexpr const char* kScopeCorpus = "corpus";
constexpr const char* kLexical = "LEXICAL";
const std::array<std::string, 3> kThirdScopes = {"third1", "third2", "third3"};

ResultRow row_from(const std::string& conv, const std::string& feature,
                   const std::string& scope, const MeasureResult& r) {
  ResultRow row;
  row.conversation = conv;
  row.feature = feature;
  row.measure = std::string(measure_name(r.measure));
  row.scope = scope;
  row.status = std::string(status_name(r.status));
  row.n = r.n;
  row.note = r.note;
  if (r.measure == Measure::kTurnProx) row.seed = r.seed;
  if (r.status == Status::kOk) {
    row.statistic = r.statistic;
    row.p = r.p;
    row.label = r.label;
  }
  return row;
}

ResultRow placeholder(const std::string& conv, const std::string& feature,
                      Measure m, const std::string& scope, Status st,
                      const std::string& note) {
  MeasureResult r;
  r.measure = m;
  r.status = st;
  r.note = note;
  return row_from(conv, feature, scope, r);
}

SummaryRow summary_from(const std::string& feature, const std::string& measure,
                        const std::string& scope, const MeasureResult& r) {
  SummaryRow s;
  s.feature = feature;
  s.measure = measure;
  s.scope = scope;
  s.status = std::string(status_name(r.status));
  s.n = r.n;
  s.note = r.note;
  if (r.status == Status::kOk) {
    s.statistic = r.statistic;
    s.p = r.p;
  }
  return s;
}

void set_pct(SummaryRow& s, const std::map<std::string, bool>& verdicts,
             std::size_t evaluated, std::size_t total) {
  s.evaluated = evaluated;
  s.total = total;
  s.detected = 0;
  for (const auto& [c, v] : verdicts) s.detected += v;
  if (total > 0)
    s.pct_detected = 100.0 * static_cast<double>(s.detected) /
                     static_cast<double>(total);
}

Lexicon load_or(const std::optional<std::filesystem::path>& p, Lexicon dflt) {
  return p ? Lexicon::load(*p) : std::move(dflt);
}

struct ConvData {
  const Conversation* conv = nullptr;
  std::vector<Turn> turns;
  std::vector<CswFeatures> csw;
  std::optional<std::vector<ProsodyVector>> prosody;  // raw, per utterance
  Status prosody_status = Status::kSkipped;
  std::string prosody_note;
};

// Collects per-conversation cell results for one (feature, family).
struct FeatureRun {
  ProximityPairs pooled;
  std::map<std::string, bool> prox_verdict;
  std::map<std::string, bool> conv_verdict;
  std::map<std::string, bool> sync_verdict;
  std::vector<double> conv_r;
  std::vector<double> sync_r;
  std::size_t prox_ok = 0;
  std::array<std::map<std::string, std::array<std::optional<double>, 3>>, 3>
      thirds;  // [third][conv][measure]
  std::array<std::array<std::map<std::string, bool>, 3>, 3> third_verdict;
  std::vector<FeatureSeries> raw;
};

}  // namespace

void RunConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ContractViolation("alpha must be in (0, 1)");
  for (const auto& f : formats) {
    if (f != "csv" && f != "jsonl" && f != "md")
      throw ContractViolation("unknown format '" + f + "'");
  }
  if (other_sample == 0) throw ContractViolation("other_sample must be > 0");
}

std::optional<SyncDirection> parse_sync_direction(std::string_view s) {
  if (s == "first") return SyncDirection::kFirstLeads;
  if (s == "second") return SyncDirection::kSecondLeads;
  if (s == "both") return SyncDirection::kBoth;
  return std::nullopt;
}

std::string_view sync_direction_name(SyncDirection d) {
  switch (d) {
    case SyncDirection::kFirstLeads:
      return "first";
    case SyncDirection::kSecondLeads:
      return "second";
    case SyncDirection::kBoth:
      return "both";
  }
  return "?";
}

bool ResultBundle::has_failures() const {
  return std::any_of(manifest.begin(), manifest.end(),
                     [](const auto& m) { return m.status == "FAILED"; });
}

GenderRow gender_weighted_pct(
    const std::string& feature, const std::string& measure,
    const std::map<std::string, bool>& verdicts,
    const std::map<std::string, std::pair<Gender, Gender>>& genders) {
  GenderRow g;
  g.feature = feature;
  g.measure = measure;
  for (const auto& [conv, pair] : genders) {
    auto it = verdicts.find(conv);
    const bool hit = it != verdicts.end() && it->second;
    const auto [a, b] = pair;
    if (a == Gender::kUnspecified || b == Gender::kUnspecified) {
      ++g.excluded;
    } else if (a == b) {
      ++g.same_total;
      g.same_detected += hit;
    } else {
      ++g.mixed_total;
      g.mixed_detected += hit;
    }
  }
  auto pct = [](std::size_t d, std::size_t t) -> std::optional<double> {
    if (t == 0) return std::nullopt;
    return static_cast<double>(d) / static_cast<double>(t) * 50.0;
  };
  g.same_pct = pct(g.same_detected, g.same_total);
  g.mixed_pct = pct(g.mixed_detected, g.mixed_total);
  return g;
}

std::string csw_feature_label(const std::string& key) {
  if (key == "csw_presence") return "CSW pres.";
  if (key == "csw_ratio") return "CSW amt.";
  if (key == "csw_I") return "CSW strat. (I)";
  if (key == "csw_A") return "CSW strat. (A)";
  if (key == "csw_O") return "CSW strat. (O)";
  return key;
}

std::vector<FeatureSeries> csw_series(const Conversation& conv,
                                      const std::vector<Turn>& turns,
                                      const std::vector<CswFeatures>& utt) {
  const auto& keys = csw_feature_keys();
  std::vector<FeatureSeries> out(keys.size());
  for (std::size_t f = 0; f < keys.size(); ++f) {
    out[f].conversation_id = conv.id;
    out[f].feature = keys[f];
  }
  constexpr CswStrategy kS[3] = {CswStrategy::kInsertional,
                                 CswStrategy::kAlternational,
                                 CswStrategy::kOther};
  for (const auto& t : turns) {
    double presence = 0.0;
    double switched = 0.0;
    double words = 0.0;
    std::array<double, 3> strat = {0, 0, 0};
    for (std::size_t i = 0; i < t.utterances.size(); ++i) {
      const auto& c = utt[t.first_utterance + i];
      const auto n = static_cast<double>(t.utterances[i].tokens.size());
      presence = std::max(presence, c.presence ? 1.0 : 0.0);
      switched += c.ratio * n;
      words += n;
      for (int s = 0; s < 3; ++s) {
        if (c.strategies.contains(kS[s])) strat[s] = 1.0;
      }
    }
    const double vals[5] = {presence, words > 0 ? switched / words : 0.0,
                            strat[0], strat[1], strat[2]};
    for (std::size_t f = 0; f < keys.size(); ++f)
      out[f].turns.push_back({t.index, t.speaker_id, vals[f]});
  }
  return out;
}

std::vector<FeatureSeries> prosody_series(
    const Conversation& conv, const std::vector<Turn>& turns,
    const std::vector<ProsodyVector>& utt) {
  std::vector<FeatureSeries> out;
  for (auto f : all_prosody_features()) {
    FeatureSeries s;
    s.conversation_id = conv.id;
    s.feature = std::string(feature_key(f));
    for (const auto& t : turns) {
      double wsum = 0.0;
      double vsum = 0.0;
      for (std::size_t i = 0; i < t.utterances.size(); ++i) {
        const auto& v = utt[t.first_utterance + i][f];
        if (!v) continue;
        const double w = t.utterances[i].duration();
        wsum += w;
        vsum += w * *v;
      }
      std::optional<double> value;
      if (wsum > 0.0) value = vsum / wsum;
      s.turns.push_back({t.index, t.speaker_id, value});
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SpeakerMean> speaker_means(const FeatureSeries& s) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& t : s.turns) {
    if (!t.value) continue;
    auto& a = acc[t.speaker_id];
    a.first += *t.value;
    ++a.second;
  }
  std::vector<SpeakerMean> out;
  for (const auto& [sp, a] : acc)
    out.push_back({s.conversation_id, sp, a.first / static_cast<double>(a.second)});
  return out;
}

std::vector<ProsodyVector> audio_prosody(
    const Conversation& conv, std::vector<std::string>& diagnostics) {
  if (!conv.audio) throw AudioError(conv.id + ": no audio reference");
  std::filesystem::path path = conv.audio->path;
  if (path.is_relative() && !conv.source.empty())
    path = conv.source.parent_path() / path;
  std::map<int, AudioSignal> channels;
  std::vector<ProsodyVector> out(conv.utterances.size());
  for (std::size_t i = 0; i < conv.utterances.size(); ++i) {
    const auto& u = conv.utterances[i];
    int ch = 0;
    if (auto it = conv.audio->channel_map.find(u.speaker_id);
        it != conv.audio->channel_map.end())
      ch = it->second;
    auto sig = channels.find(ch);
    if (sig == channels.end())
      sig = channels.emplace(ch, read_audio(path, ch)).first;
    try {
      out[i] = utterance_prosody(sig->second, u);
    } catch (const Error& e) {
      diagnostics.push_back(conv.id + " utterance " + std::to_string(i) +
                            ": " + e.what());
    }
  }
  return out;
}

namespace {

std::optional<double> conversation_snr(const Conversation& conv) {
  if (!conv.audio) return std::nullopt;
  std::filesystem::path path = conv.audio->path;
  if (path.is_relative() && !conv.source.empty())
    path = conv.source.parent_path() / path;
  std::set<int> chans;
  for (const auto& sp : conv.speakers) {
    auto it = conv.audio->channel_map.find(sp.id);
    chans.insert(it == conv.audio->channel_map.end() ? 0 : it->second);
  }
  double sum = 0.0;
  for (int c : chans) sum += estimate_snr(read_audio(path, c));
  return sum / static_cast<double>(chans.size());
}

void run_family(ResultBundle& b, const RunConfig& cfg,
                const std::vector<ConvData>& data,
                const std::vector<std::string>& keys,
                const std::function<std::optional<std::vector<FeatureSeries>>(
                    const ConvData&, bool raw, std::string& why, Status& st)>&
                    series_of,
                const std::map<std::string, std::pair<Gender, Gender>>& genders) {
  const std::size_t total = data.size();
  std::map<std::string, FeatureRun> runs;
  const Measure turn_measures[3] = {Measure::kTurnProx, Measure::kTurnConv,
                                    Measure::kTurnSync};
  bool any_failed = false;

  for (const auto& d : data) {
    std::string why;
    Status st = Status::kOk;
    auto z = series_of(d, false, why, st);
    auto raw = series_of(d, true, why, st);
    for (std::size_t f = 0; f < keys.size(); ++f) {
      const auto& key = keys[f];
      auto& run = runs[key];
      if (!z) {
        any_failed |= st == Status::kFailed;
        for (auto m : turn_measures)
          b.results.push_back(
              placeholder(d.conv->id, key, m, kScopeTurn, st, why));
        if (cfg.thirds) {
          for (const auto& scope : kThirdScopes)
            for (auto m : turn_measures)
              b.results.push_back(placeholder(d.conv->id, key, m, scope, st, why));
        }
        for (auto m : {Measure::kConvProx, Measure::kConvConv})
          b.results.push_back(
              placeholder(d.conv->id, key, m, kScopeConv, st, why));
        continue;
      }
      const FeatureSeries& s = (*z)[f];
      run.raw.push_back((*raw)[f]);
      const std::uint64_t seed = derive_seed(cfg.seed, d.conv->id, key);
      ProximityOptions po;
      po.other_sample = cfg.other_sample;
      po.alpha = cfg.alpha;
      const auto prox = turn_proximity(s, seed, po, &run.pooled);
      const auto conv = turn_convergence(s, cfg.alpha);
      const auto sync = turn_synchrony(s, cfg.sync_direction, cfg.alpha);
      for (const auto* r : {&prox, &conv, &sync})
        b.results.push_back(row_from(d.conv->id, key, kScopeTurn, *r));
      run.prox_verdict[d.conv->id] = prox.detected;
      run.conv_verdict[d.conv->id] = conv.detected;
      run.sync_verdict[d.conv->id] = sync.detected;
      run.prox_ok += prox.status == Status::kOk;
      if (conv.status == Status::kOk) run.conv_r.push_back(conv.statistic);
      if (sync.status == Status::kOk) run.sync_r.push_back(sync.statistic);

      if (cfg.thirds) {
        const auto th = thirds_analysis(s, seed, cfg.sync_direction, po);
        for (std::size_t t = 0; t < 3; ++t) {
          const MeasureResult* rs[3] = {&th[t].proximity, &th[t].convergence,
                                        &th[t].synchrony};
          for (std::size_t m = 0; m < 3; ++m) {
            b.results.push_back(
                row_from(d.conv->id, key, kThirdScopes[t], *rs[m]));
            if (rs[m]->status == Status::kOk)
              run.thirds[t][d.conv->id][m] = rs[m]->statistic;
            run.third_verdict[t][m][d.conv->id] = rs[m]->detected;
          }
        }
      }
    }
  }

  for (const auto& key : keys) {
    auto& run = runs[key];
    const std::size_t first_summary = b.summaries.size();
    // Turn-level corpus summaries.
    {
      auto s = summary_from(key, "TURN_PROX", kScopeCorpus,
                            summarize_proximity(run.pooled, cfg.alpha));
      set_pct(s, run.prox_verdict, run.prox_ok, total);
      b.summaries.push_back(s);
      auto c = summary_from(key, "TURN_CONV", kScopeCorpus,
                            summarize_r(Measure::kTurnConv, run.conv_r, cfg.alpha));
      set_pct(c, run.conv_verdict, run.conv_r.size(), total);
      b.summaries.push_back(c);
      auto y = summary_from(key, "TURN_SYNC", kScopeCorpus,
                            summarize_r(Measure::kTurnSync, run.sync_r, cfg.alpha));
      set_pct(y, run.sync_verdict, run.sync_r.size(), total);
      b.summaries.push_back(y);
    }
    // Conversation level, on raw (un-normalized) values.
    std::map<std::string, bool> cprox_verdict;
    if (!run.raw.empty()) {
      std::vector<SpeakerMean> means;
      for (const auto& s : run.raw) {
        auto m = speaker_means(s);
        means.insert(means.end(), m.begin(), m.end());
      }
      const auto cp = conv_proximity(means, cfg.alpha);
      std::size_t ok = 0;
      for (const auto& s : run.raw) {
        auto it = cp.per_conversation.find(s.conversation_id);
        if (it == cp.per_conversation.end()) {
          b.results.push_back(placeholder(s.conversation_id, key,
                                          Measure::kConvProx, kScopeConv,
                                          Status::kNotEvaluable,
                                          "speaker without values"));
          cprox_verdict[s.conversation_id] = false;
          continue;
        }
        b.results.push_back(row_from(s.conversation_id, key, kScopeConv, it->second));
        cprox_verdict[s.conversation_id] = it->second.detected;
        ok += it->second.status == Status::kOk;
      }
      auto cs = summary_from(key, "CONV_PROX", kScopeCorpus, cp.corpus);
      set_pct(cs, cprox_verdict, ok, total);
      b.summaries.push_back(cs);

      const auto cc = conv_convergence(run.raw, cfg.alpha);
      std::set<std::string> with_gaps;
      for (const auto& g : cc.gaps) {
        ResultRow r;
        r.conversation = g.conversation_id;
        r.feature = key;
        r.measure = "CONV_CONV";
        r.scope = kScopeConv;
        r.statistic = g.second - g.first;
        r.n = 2;
        r.status = "OK";
        r.label = g.second < g.first ? "GAP_SHRANK" : "GAP_GREW";
        b.results.push_back(r);
        with_gaps.insert(g.conversation_id);
      }
      for (const auto& s : run.raw) {
        if (!with_gaps.count(s.conversation_id))
          b.results.push_back(placeholder(s.conversation_id, key,
                                          Measure::kConvConv, kScopeConv,
                                          Status::kNotEvaluable,
                                          "a speaker has no values in one half"));
      }
      for (const auto& d : cc.diagnostics) b.diagnostics.push_back(key + ": " + d);
      auto ccs = summary_from(key, "CONV_CONV", kScopeCorpus, cc.corpus);
      ccs.evaluated = cc.gaps.size();
      ccs.total = total;
      b.summaries.push_back(ccs);
    } else {
      for (const char* m : {"CONV_PROX", "CONV_CONV"}) {
        SummaryRow s;
        s.feature = key;
        s.measure = m;
        s.scope = kScopeCorpus;
        s.total = total;
        s.status = "SKIPPED";
        b.summaries.push_back(s);
      }
    }

    if (cfg.thirds) {
      const char* names[3] = {"TURN_PROX", "TURN_CONV", "TURN_SYNC"};
      for (std::size_t m = 0; m < 3; ++m) {
        for (std::size_t t = 0; t < 3; ++t) {
          SummaryRow s;
          s.feature = key;
          s.measure = names[m];
          s.scope = kThirdScopes[t];
          std::vector<double> stats;
          for (const auto& [c, v] : run.thirds[t])
            if (v[m]) stats.push_back(*v[m]);
          set_pct(s, run.third_verdict[t][m], stats.size(), total);
          s.n = stats.size();
          s.status = stats.empty() ? "NOT_EVALUABLE" : "OK";
          if (!stats.empty()) s.statistic = mean(stats);
          b.summaries.push_back(s);
        }
        // Earlier thirds against the final third, paired by conversation.
        for (std::size_t t = 0; t < 2; ++t) {
          std::vector<double> early;
          std::vector<double> late;
          for (const auto& [c, v] : run.thirds[t]) {
            auto it = run.thirds[2].find(c);
            if (!v[m] || it == run.thirds[2].end() || !it->second[m]) continue;
            early.push_back(*v[m]);
            late.push_back(*it->second[m]);
          }
          SummaryRow s;
          s.feature = key;
          s.measure = names[m];
          s.scope = kThirdScopes[t] + "_vs_third3";
          s.total = total;
          s.n = early.size();
          try {
            const auto st = paired_ttest(early, late);
            s.statistic = st.statistic;
            s.p = st.p;
            s.status = "OK";
          } catch (const DegenerateError& e) {
            s.status = "NOT_EVALUABLE";
            s.note = e.what();
          }
          b.summaries.push_back(s);
        }
      }
    }

    if (run.raw.empty()) {
      // No conversation produced values for this feature.
      for (std::size_t i = first_summary; i < b.summaries.size(); ++i) {
        b.summaries[i].status = any_failed ? "FAILED" : "SKIPPED";
        b.summaries[i].statistic.reset();
        b.summaries[i].p.reset();
        b.summaries[i].pct_detected.reset();
      }
    } else {
      b.gender.push_back(gender_weighted_pct(key, "TURN_PROX", run.prox_verdict, genders));
      b.gender.push_back(gender_weighted_pct(key, "TURN_CONV", run.conv_verdict, genders));
      b.gender.push_back(gender_weighted_pct(key, "TURN_SYNC", run.sync_verdict, genders));
      b.gender.push_back(gender_weighted_pct(key, "CONV_PROX", cprox_verdict, genders));
    }
  }
}

}  // namespace

ResultBundle analyze(const Corpus& input, const RunConfig& cfg,
                     const std::optional<FeatureTable>& features) {
  cfg.validate();
  ResultBundle b;
  b.seed = cfg.seed;
  b.alpha = cfg.alpha;
  b.conversations_read = input.conversations.size();

  const Lexicon cues = load_or(cfg.cues_path, default_cues());
  const Lexicon fillers = load_or(cfg.fillers_path, default_fillers());
  const Lexicon edge = cues.merged_with(fillers);

  Corpus corpus = input;
  if (cfg.overrides_path)
    corpus = apply_overrides(std::move(corpus), read_overrides(*cfg.overrides_path));
  corpus = filter_dyadic_csw(corpus);
  b.conversations_analyzed = corpus.conversations.size();
  for (const auto& c : input.conversations) {
    if (!corpus.find(c.id))
      b.manifest.push_back({c.id, "filter", "SKIPPED",
                            c.is_dyadic() ? "no code-switched utterance"
                                          : "not a dyad"});
  }
  if (corpus.conversations.empty()) {
    b.manifest.push_back({"*", "filter", "FAILED",
                          "no dyadic code-switched conversations to analyze"});
    return b;
  }

  std::map<std::string, std::pair<Gender, Gender>> genders;
  for (const auto& c : corpus.conversations)
    genders[c.id] = {c.speakers[0].gender, c.speakers[1].gender};

  // Per-conversation inputs.
  std::vector<ConvData> data;
  SnrSummary snr;
  for (const auto& conv : corpus.conversations) {
    ConvData d;
    d.conv = &conv;
    d.turns = build_turns(conv);
    d.csw = conversation_csw(conv, edge);
    if (!cfg.prosody) {
      d.prosody_note = "prosody disabled";
    } else if (features) {
      auto it = features->find(conv.id);
      if (it == features->end()) {
        d.prosody_note = "no rows in the feature dump";
        b.manifest.push_back({conv.id, "prosody", "SKIPPED", d.prosody_note});
      } else {
        std::vector<ProsodyVector> v(conv.utterances.size());
        for (const auto& [idx, row] : it->second) {
          if (idx >= v.size() || row.speaker_id != conv.utterances[idx].speaker_id) {
            b.manifest.push_back({conv.id, "prosody", "FAILED",
                                  "feature dump row " + std::to_string(idx) +
                                      " does not match the transcript"});
            d.prosody_status = Status::kFailed;
            break;
          }
          v[idx] = row.values;
        }
        if (d.prosody_status != Status::kFailed) {
          d.prosody = std::move(v);
          d.prosody_status = Status::kOk;
        } else {
          d.prosody_note = "feature dump does not match the transcript";
        }
      }
    } else if (cfg.use_audio && conv.audio) {
      try {
        d.prosody = audio_prosody(conv, b.diagnostics);
        d.prosody_status = Status::kOk;
        if (auto s = conversation_snr(conv)) snr.per_conversation.push_back({conv.id, *s});
      } catch (const Error& e) {
        d.prosody_status = Status::kFailed;
        d.prosody_note = e.what();
        b.manifest.push_back({conv.id, "prosody", "FAILED", e.what()});
      }
    } else {
      d.prosody_note = "no audio and no feature dump";
    }
    data.push_back(std::move(d));
  }

  if (!snr.per_conversation.empty()) {
    std::vector<double> v;
    for (const auto& [c, x] : snr.per_conversation) {
      v.push_back(x);
      snr.above_threshold += x > snr.threshold_db;
    }
    snr.mean = mean(v);
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    snr.median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    b.snr = snr;
  }

  if (cfg.csw) {
    b.csw_stats = corpus_csw_stats(corpus, edge);
    run_family(
        b, cfg, data, csw_feature_keys(),
        [](const ConvData& d, bool, std::string&, Status&)
            -> std::optional<std::vector<FeatureSeries>> {
          return csw_series(*d.conv, d.turns, d.csw);
        },
        genders);
  }

  if (cfg.prosody) {
    // z-scores per speaker over every utterance the speaker has.
    std::map<std::string, std::vector<ProsodyVector>> by_speaker;
    std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> where;
    for (std::size_t c = 0; c < data.size(); ++c) {
      if (!data[c].prosody) continue;
      const auto& conv = *data[c].conv;
      for (std::size_t i = 0; i < conv.utterances.size(); ++i) {
        const auto& sp = conv.utterances[i].speaker_id;
        by_speaker[sp].push_back((*data[c].prosody)[i]);
        where[sp].push_back({c, i});
      }
    }
    auto z = zscore_by_speaker(by_speaker);
    b.diagnostics.insert(b.diagnostics.end(), z.diagnostics.begin(),
                         z.diagnostics.end());
    std::vector<std::vector<ProsodyVector>> normalized(data.size());
    for (std::size_t c = 0; c < data.size(); ++c) {
      if (data[c].prosody) normalized[c].resize(data[c].prosody->size());
    }
    for (const auto& [sp, locs] : where) {
      for (std::size_t k = 0; k < locs.size(); ++k)
        normalized[locs[k].first][locs[k].second] = z.normalized[sp][k];
    }
    std::vector<std::string> keys;
    for (auto f : all_prosody_features()) keys.emplace_back(feature_key(f));
    std::map<const ConvData*, std::size_t> pos;
    for (std::size_t c = 0; c < data.size(); ++c) pos[&data[c]] = c;
    run_family(
        b, cfg, data, keys,
        [&](const ConvData& d, bool raw, std::string& why,
            Status& st) -> std::optional<std::vector<FeatureSeries>> {
          if (!d.prosody) {
            why = d.prosody_note;
            st = d.prosody_status == Status::kFailed ? Status::kFailed
                                                     : Status::kSkipped;
            return std::nullopt;
          }
          return prosody_series(*d.conv, d.turns,
                                raw ? *d.prosody : normalized[pos.at(&d)]);
        },
        genders);
  }

  if (cfg.lexical) {
    try {
      for (const auto& m : run_lexical(corpus, cues, fillers, cfg.alpha)) {
        std::map<std::string, bool> verdicts;
        std::size_t evaluated = 0;
        for (const auto& conv : corpus.conversations) {
          ResultRow r;
          r.conversation = conv.id;
          r.feature = m.feature;
          r.measure = kLexical;
          r.scope = kScopeConv;
          auto it = m.conversations.find(conv.id);
          if (it == m.conversations.end() || !it->second.test) {
            r.status = "NOT_EVALUABLE";
            r.note = it == m.conversations.end() ? "no scorable sides"
                                                 : it->second.note;
            verdicts[conv.id] = false;
          } else {
            const auto& v = it->second;
            r.status = "OK";
            r.statistic = v.mean_difference;
            r.p = v.test->p;
            r.n = v.test->n;
            r.label = v.entraining ? "ENTRAINING" : "NOT_SIGNIFICANT";
            verdicts[conv.id] = v.entraining;
            ++evaluated;
          }
          b.results.push_back(r);
        }
        SummaryRow s;
        s.feature = m.feature;
        s.measure = kLexical;
        s.scope = kScopeCorpus;
        if (m.corpus_test) {
          s.statistic = m.corpus_test->statistic;
          s.p = m.corpus_test->p;
          s.n = m.corpus_test->n;
          s.status = "OK";
        } else {
          s.status = "NOT_EVALUABLE";
          s.n = m.sides.size();
        }
        set_pct(s, verdicts, evaluated, corpus.conversations.size());
        b.summaries.push_back(s);
        b.gender.push_back(gender_weighted_pct(m.feature, kLexical, verdicts, genders));
        b.diagnostics.insert(b.diagnostics.end(), m.diagnostics.begin(),
                             m.diagnostics.end());
      }
    } catch (const Error& e) {
      b.manifest.push_back({"*", "lexical", "SKIPPED", e.what()});
    }
  }
  return b;
}

ResultBundle run_pipeline(const RunConfig& config) {
  config.validate();
  ParseResult parsed = parse_corpus(config.corpus_dir);
  std::optional<FeatureTable> features;
  if (config.features_path)
    features = index_features(read_feature_dump(*config.features_path));
  spdlog::info("read {} conversations from {}", parsed.corpus.conversations.size(),
               config.corpus_dir.string());
  ResultBundle b = analyze(parsed.corpus, config, features);
  std::vector<ManifestEntry> rejected;
  for (const auto& d : parsed.diagnostics) {
    rejected.push_back({d.file, "ingest", "FAILED",
                        (d.line ? "line " + std::to_string(d.line) + ": " : "") +
                            d.message});
  }
  b.manifest.insert(b.manifest.begin(), rejected.begin(), rejected.end());
  b.conversations_read += parsed.diagnostics.size();
  return b;
}

}  // namespace entrain
