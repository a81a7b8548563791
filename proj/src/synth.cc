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

#include "entrain/synth.h"

#include <cmath>
#include <cstdio>
#include <set>
#include <utility>

#include "entrain/error.h"
#include "entrain/rng.h"

namespace entrain {

namespace {

const std::vector<std::string> kL1Words = {
    "casa",    "comer",   "trabajo", "familia", "escuela", "tiempo",
    "dinero",  "ciudad",  "amigo",   "carro",   "playa",   "libro",
    "noche",   "semana",  "comida",  "hermano", "madre",   "perro",
    "calle",   "tienda",  "verano",  "mucho",   "grande",  "nuevo",
    "hablar",  "salir",   "llamar",  "pagar",   "tengo",   "vamos",
};

const std::vector<std::string> kL2Words = {
    "house",  "work",    "school", "family", "money",  "city",
    "friend", "car",     "beach",  "book",   "night",  "week",
    "food",   "brother", "mother", "dog",    "street", "store",
    "summer", "big",     "new",    "talk",   "leave",  "call",
    "pay",    "check",   "going",  "really", "thing",  "people",
};

const std::vector<std::string> kL1Edge = {"pues", "claro", "dale", "vale"};
const std::vector<std::string> kL2Edge = {"okay", "yeah", "alright", "right"};

const std::vector<std::string>& words_for(Lang l) {
  return l == Lang::kL1 ? kL1Words : kL2Words;
}

const std::string& pick(Rng& rng, const std::vector<std::string>& v) {
  return v[rng.uniform_int(v.size())];
}

// Letter-only pseudo-word for topic index i.
std::string topic_word(std::size_t i) {
  std::string s = "zt";
  do {
    s += static_cast<char>('a' + i % 26);
    i /= 26;
  } while (i > 0);
  return s;
}

std::vector<double> feature_values(const FeatureSpec& f, std::size_t turns,
                                   Rng& rng) {
  const double shared = f.shared_offset_sd > 0 ? rng.normal(0.0, f.shared_offset_sd) : 0.0;
  const double off_a = f.speaker_offset_sd > 0 ? rng.normal(0.0, f.speaker_offset_sd) : 0.0;
  const double off_b = f.speaker_offset_sd > 0 ? rng.normal(0.0, f.speaker_offset_sd) : 0.0;
  const double mu[2] = {f.mean_a + shared + off_a, f.mean_b + shared + off_b};
  const double sd[2] = {f.sd_a, f.sd_b};
  const double m = f.magnitude;

  std::vector<double> v(turns);
  for (std::size_t k = 0; k < turns; ++k) {
    const std::size_t s = k % 2;
    switch (f.injection) {
      case Injection::kNone:
        v[k] = rng.normal(mu[s], sd[s]);
        break;
      case Injection::kProximity:
        if (k == 0) {
          v[k] = rng.normal(mu[s], sd[s]);
        } else {
          v[k] = m * v[k - 1] + (1.0 - m) * mu[s] +
                 std::sqrt(1.0 - m * m) * sd[s] * rng.normal();
        }
        break;
      case Injection::kConvergence: {
        const double progress =
            turns > 1 ? static_cast<double>(k) / static_cast<double>(turns - 1)
                      : 0.0;
        const double gap = (mu[1] - mu[0]) * (1.0 - m * progress);
        const double mid = 0.5 * (mu[0] + mu[1]);
        v[k] = (s == 0 ? mid - 0.5 * gap : mid + 0.5 * gap) +
               sd[s] * rng.normal();
        break;
      }
      case Injection::kSynchrony:
        if (s == 0 || k == 0) {
          v[k] = rng.normal(mu[s], sd[s]);
        } else {
          v[k] = mu[1] + m * (sd[1] / sd[0]) * (v[k - 1] - mu[0]) +
                 std::sqrt(std::max(0.0, 1.0 - m * m)) * sd[1] * rng.normal();
        }
        break;
    }
  }
  return v;
}

std::vector<Token> utterance_tokens(Rng& rng, const SynthSpec& spec,
                                    const std::vector<std::string>& topic,
                                    std::optional<CswStrategy> strategy) {
  const Lang matrix = rng.bernoulli(0.5) ? Lang::kL1 : Lang::kL2;
  const Lang other = opposite(matrix);
  std::size_t len = 4 + rng.uniform_int(6);
  if (strategy == CswStrategy::kAlternational) len = std::max<std::size_t>(len, 7);

  auto matrix_word = [&]() -> Token {
    if (!topic.empty() && rng.bernoulli(spec.lexical.topic_rate))
      return {pick(rng, topic), matrix};
    return {pick(rng, words_for(matrix)), matrix};
  };

  std::vector<Token> out;
  for (std::size_t i = 0; i < len; ++i) out.push_back(matrix_word());
  if (!strategy) return out;
  switch (*strategy) {
    case CswStrategy::kInsertional: {
      const std::size_t pos = 1 + rng.uniform_int(len - 2);
      out[pos] = {pick(rng, words_for(other)), other};
      break;
    }
    case CswStrategy::kAlternational: {
      // At least 4 matrix tokens up front, then a foreign run of >= 3 that
      // stays shorter than the matrix part.
      const std::size_t foreign = 3 + rng.uniform_int((len - 4) / 2 - 1 + 1);
      for (std::size_t i = len - foreign; i < len; ++i)
        out[i] = {pick(rng, words_for(other)), other};
      break;
    }
    case CswStrategy::kOther: {
      const auto& edge = other == Lang::kL1 ? kL1Edge : kL2Edge;
      const Token t{pick(rng, edge), other};
      if (rng.bernoulli(0.5)) {
        out.front() = t;
      } else {
        out.back() = t;
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::string_view injection_name(Injection i) {
  switch (i) {
    case Injection::kNone:
      return "NONE";
    case Injection::kProximity:
      return "PROXIMITY";
    case Injection::kConvergence:
      return "CONVERGENCE";
    case Injection::kSynchrony:
      return "SYNCHRONY";
  }
  return "?";
}

std::optional<Injection> parse_injection(std::string_view name) {
  for (auto i : {Injection::kNone, Injection::kProximity,
                 Injection::kConvergence, Injection::kSynchrony}) {
    if (injection_name(i) == name) return i;
  }
  return std::nullopt;
}

void SynthSpec::validate() const {
  auto fail = [](const std::string& m) { throw ContractViolation("synth: " + m); };
  if (turns < 2) fail("need at least 2 turns");
  std::set<std::string> names;
  for (const auto& f : features) {
    if (f.name.empty()) fail("feature without a name");
    if (!names.insert(f.name).second) fail("duplicate feature " + f.name);
    if (!(f.sd_a > 0.0 && f.sd_b > 0.0)) fail(f.name + ": sd must be positive");
    if (f.shared_offset_sd < 0.0 || f.speaker_offset_sd < 0.0)
      fail(f.name + ": offset sd must be non-negative");
    const double m = f.magnitude;
    switch (f.injection) {
      case Injection::kNone:
        break;
      case Injection::kProximity:
        if (!(m > 0.0 && m < 1.0)) fail(f.name + ": proximity magnitude must be in (0, 1)");
        break;
      case Injection::kConvergence:
      case Injection::kSynchrony:
        if (!(m > 0.0 && m <= 1.0)) fail(f.name + ": magnitude must be in (0, 1]");
        break;
    }
  }
  auto prob = [&](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) fail(std::string(what) + " must be in [0, 1]");
  };
  prob(csw.p_a, "csw.p_a");
  prob(csw.p_b, "csw.p_b");
  prob(csw.coupling, "csw.coupling");
  prob(lexical.topic_rate, "lexical.topic_rate");
  for (double a : csw.strategy_alpha) {
    if (!(a > 0.0)) fail("strategy concentrations must be positive");
  }
  if (lexical.topic_rate > 0.0 &&
      (lexical.topic_size == 0 || lexical.topic_size > lexical.topic_pool))
    fail("topic_size must be in [1, topic_pool]");
}

SynthConversation generate(const SynthSpec& spec,
                           const std::string& conversation_id) {
  spec.validate();
  SynthConversation out;
  Conversation& conv = out.conversation;
  conv.id = conversation_id;
  const std::string ids[2] = {conversation_id + "_A", conversation_id + "_B"};
  conv.speakers = {{ids[0], spec.gender_a}, {ids[1], spec.gender_b}};

  for (const auto& f : spec.features) {
    Rng rng(derive_seed(spec.seed, conversation_id, "feature:" + f.name));
    const auto values = feature_values(f, spec.turns, rng);
    FeatureSeries s;
    s.conversation_id = conversation_id;
    s.feature = f.name;
    for (std::size_t k = 0; k < spec.turns; ++k)
      s.turns.push_back({k, ids[k % 2], values[k]});
    out.series[f.name] = std::move(s);
    out.truth.injections[f.name] = {f.injection, f.magnitude};
  }

  Rng csw_rng(derive_seed(spec.seed, conversation_id, "csw"));
  Rng word_rng(derive_seed(spec.seed, conversation_id, "words"));
  const auto mix_v = csw_rng.dirichlet(std::vector<double>(
      spec.csw.strategy_alpha.begin(), spec.csw.strategy_alpha.end()));
  out.truth.strategy_mix = {mix_v[0], mix_v[1], mix_v[2]};
  out.truth.csw_entrain = spec.csw.entrain;

  std::vector<std::string> topic;
  if (spec.lexical.topic_rate > 0.0) {
    for (auto i : word_rng.sample_without_replacement(spec.lexical.topic_pool,
                                                      spec.lexical.topic_size))
      topic.push_back(topic_word(i));
  }

  constexpr CswStrategy kStrategies[3] = {CswStrategy::kInsertional,
                                          CswStrategy::kAlternational,
                                          CswStrategy::kOther};
  double clock = 0.0;
  bool prev_switch = false;
  for (std::size_t k = 0; k < spec.turns; ++k) {
    const double base = k % 2 == 0 ? spec.csw.p_a : spec.csw.p_b;
    double p = base;
    if (spec.csw.entrain && k > 0) {
      p = prev_switch ? base + spec.csw.coupling * (1.0 - base)
                      : base * (1.0 - spec.csw.coupling);
    }
    const bool sw = csw_rng.bernoulli(p);
    std::optional<CswStrategy> strategy;
    if (sw) strategy = kStrategies[csw_rng.categorical(mix_v)];
    prev_switch = sw;

    Utterance u;
    u.speaker_id = ids[k % 2];
    u.tokens = utterance_tokens(word_rng, spec, topic, strategy);
    const double dur = 0.3 * static_cast<double>(u.tokens.size());
    u.start = std::round(clock * 1000.0) / 1000.0;
    u.end = std::round((clock + dur) * 1000.0) / 1000.0;
    clock += dur + 0.25;
    conv.utterances.push_back(std::move(u));
    out.truth.strategies.push_back(strategy ? StrategySet{*strategy}
                                            : StrategySet{});
  }
  return out;
}

std::vector<FeatureRow> SynthCorpus::feature_rows() const {
  std::vector<FeatureRow> rows;
  for (const auto& sc : conversations) {
    const auto& conv = sc.conversation;
    for (std::size_t i = 0; i < conv.utterances.size(); ++i) {
      FeatureRow r;
      r.conversation_id = conv.id;
      r.utterance_index = i;
      r.speaker_id = conv.utterances[i].speaker_id;
      bool any = false;
      for (const auto& [name, s] : sc.series) {
        auto f = parse_prosody_feature(name);
        if (!f) continue;
        r.values[*f] = s.turns[i].value;
        any = true;
      }
      if (any) rows.push_back(std::move(r));
    }
  }
  return rows;
}

SynthCorpus generate_corpus(const SynthSpec& spec, std::size_t count,
                            const std::string& prefix) {
  SynthCorpus out;
  for (std::size_t i = 0; i < count; ++i) {
    char id[64];
    std::snprintf(id, sizeof id, "%s%03zu", prefix.c_str(), i);
    SynthSpec s = spec;
    s.seed = derive_seed(spec.seed, id);
    out.conversations.push_back(generate(s, id));
    out.corpus.conversations.push_back(out.conversations.back().conversation);
  }
  return out;
}

std::vector<SweepCell> sweep(const SweepGrid& grid) {
  std::vector<SweepCell> cells;
  for (auto inj : grid.injections) {
    for (double mag : grid.magnitudes) {
      SweepCell cell[3];
      const Measure ms[3] = {Measure::kTurnProx, Measure::kTurnConv,
                             Measure::kTurnSync};
      for (int j = 0; j < 3; ++j) {
        cell[j].injection = inj;
        cell[j].magnitude = mag;
        cell[j].measure = ms[j];
      }
      for (std::size_t s = 0; s < grid.seeds; ++s) {
        SynthSpec spec;
        spec.turns = grid.turns;
        spec.features = {grid.feature};
        spec.features[0].injection = mag > 0.0 ? inj : Injection::kNone;
        spec.features[0].magnitude = mag;
        spec.seed = derive_seed(grid.base_seed, std::to_string(s));
        const auto conv = generate(spec, "sweep");
        const auto& series = conv.series.at(grid.feature.name);
        const bool hit[3] = {
            turn_proximity(series, derive_seed(spec.seed, "proximity"),
                           {.alpha = grid.alpha})
                .detected,
            turn_convergence(series, grid.alpha).detected,
            turn_synchrony(series, grid.sync_direction, grid.alpha).detected,
        };
        for (int j = 0; j < 3; ++j) {
          ++cell[j].trials;
          cell[j].detected += hit[j];
        }
      }
      cells.insert(cells.end(), cell, cell + 3);
    }
  }
  return cells;
}

}  // namespace entrain
