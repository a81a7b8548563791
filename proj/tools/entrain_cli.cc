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

// Command-line front end: ingest, csw, prosody, entrain, synth, report.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <spdlog/cfg/env.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "entrain/bangor.h"
#include "entrain/corpus.h"
#include "entrain/csw.h"
#include "entrain/emit.h"
#include "entrain/error.h"
#include "entrain/feature_dump.h"
#include "entrain/lexicon.h"
#include "entrain/pipeline.h"
#include "entrain/prosody.h"
#include "entrain/rng.h"
#include "entrain/synth.h"
#include "entrain/wav.h"

namespace {

using entrain::RunConfig;

struct Options {
  RunConfig run;
  std::string corpus;
  std::string out;
  std::string features;
  std::string cues;
  std::string fillers;
  std::string overrides;
  std::vector<std::string> formats;
  std::string sync = "both";
  bool no_audio = false;
  bool no_thirds = false;
  bool no_lexical = false;
  bool no_csw = false;
  bool no_prosody = false;

  // ingest
  std::string from = "bangor";
  std::string in;
  std::string l1 = "spa";
  std::string l2 = "eng";

  // synth
  std::size_t conversations = 39;
  std::size_t turns = 60;
  std::vector<std::string> inject;
  double csw_p = 0.3;
  bool csw_entrain = false;
  double topic_rate = 0.0;
  std::size_t same_gender = 24;
  std::string sweep_out;
};

std::vector<std::string> split_formats(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  for (const auto& f : in) {
    std::string cur;
    for (char c : f + ",") {
      if (c == ',') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
  }
  return out;
}

RunConfig finish_config(Options& o, std::vector<std::string> default_formats) {
  RunConfig c = o.run;
  if (o.corpus.empty()) throw CLI::ValidationError("--corpus is required");
  c.corpus_dir = o.corpus;
  if (!o.out.empty()) c.output_dir = o.out;
  if (!o.features.empty()) c.features_path = o.features;
  if (!o.cues.empty()) c.cues_path = o.cues;
  if (!o.fillers.empty()) c.fillers_path = o.fillers;
  if (!o.overrides.empty()) c.overrides_path = o.overrides;
  c.formats = o.formats.empty() ? default_formats : split_formats(o.formats);
  auto dir = entrain::parse_sync_direction(o.sync);
  if (!dir) throw CLI::ValidationError("--sync must be first, second or both");
  c.sync_direction = *dir;
  c.use_audio = !o.no_audio;
  c.thirds = !o.no_thirds;
  c.lexical = !o.no_lexical;
  c.csw = !o.no_csw;
  c.prosody = !o.no_prosody;
  c.validate();
  return c;
}

entrain::Lexicon edge_lexicon(const Options& o) {
  const auto cues = o.cues.empty() ? entrain::default_cues()
                                   : entrain::Lexicon::load(o.cues);
  const auto fillers = o.fillers.empty() ? entrain::default_fillers()
                                         : entrain::Lexicon::load(o.fillers);
  return cues.merged_with(fillers);
}

entrain::Corpus load_corpus(const Options& o, int& rejected) {
  auto parsed = entrain::parse_corpus(o.corpus);
  for (const auto& d : parsed.diagnostics) {
    spdlog::error("{}:{}: {}", d.file, d.line, d.message);
  }
  rejected = static_cast<int>(parsed.diagnostics.size());
  return std::move(parsed.corpus);
}

int cmd_ingest(Options& o) {
  if (o.from != "bangor") throw CLI::ValidationError("--from supports: bangor");
  if (o.in.empty() || o.out.empty())
    throw CLI::ValidationError("ingest needs --in and --out");
  entrain::BangorOptions bo;
  bo.l1 = o.l1;
  bo.l2 = o.l2;
  auto parsed = entrain::ingest_bangor(o.in, bo);
  for (const auto& d : parsed.diagnostics)
    spdlog::error("{}:{}: {}", d.file, d.line, d.message);
  entrain::write_corpus(parsed.corpus, o.out);
  spdlog::info("wrote {} conversations to {}", parsed.corpus.conversations.size(), o.out);
  return parsed.diagnostics.empty() ? 0 : 1;
}

int cmd_csw(Options& o) {
  int rejected = 0;
  entrain::Corpus corpus = load_corpus(o, rejected);
  if (!o.overrides.empty())
    corpus = entrain::apply_overrides(std::move(corpus), entrain::read_overrides(o.overrides));
  corpus = entrain::filter_dyadic_csw(corpus);
  const auto edge = edge_lexicon(o);
  const std::string dir = o.out.empty() ? "entrain_out" : o.out;
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / "csw_features.csv");
  out << "conversation,utterance_index,speaker,presence,ratio,strategies,source\n";
  for (const auto& conv : corpus.conversations) {
    const auto feats = entrain::conversation_csw(conv, edge);
    for (std::size_t i = 0; i < feats.size(); ++i) {
      char ratio[32];
      std::snprintf(ratio, sizeof ratio, "%.10g", feats[i].ratio);
      out << conv.id << ',' << i << ',' << conv.utterances[i].speaker_id << ','
          << (feats[i].presence ? 1 : 0) << ',' << ratio << ','
          << feats[i].strategies.to_string() << ','
          << entrain::label_source_name(feats[i].source) << '\n';
    }
  }
  if (!corpus.conversations.empty()) {
    const auto s = entrain::corpus_csw_stats(corpus, edge);
    std::cout << "utterances " << s.utterances << "\nmonolingual_pct "
              << entrain::format_pct(s.pct_monolingual()) << "\ninsertional_pct "
              << entrain::format_pct(s.pct_insertional()) << "\nalternational_pct "
              << entrain::format_pct(s.pct_alternational()) << "\nother_pct "
              << entrain::format_pct(s.pct_other()) << '\n';
  }
  return rejected ? 1 : 0;
}

int cmd_prosody(Options& o) {
  int rejected = 0;
  const entrain::Corpus corpus = load_corpus(o, rejected);
  const std::string dir = o.out.empty() ? "entrain_out" : o.out;
  std::filesystem::create_directories(dir);
  std::vector<entrain::FeatureRow> rows;
  std::ofstream snr(std::filesystem::path(dir) / "snr.csv");
  snr << "conversation,channel,snr_db\n";
  int failed = 0;
  for (const auto& conv : corpus.conversations) {
    if (!conv.audio) {
      spdlog::warn("{}: no audio reference, skipped", conv.id);
      continue;
    }
    try {
      std::vector<std::string> diag;
      const auto v = entrain::audio_prosody(conv, diag);
      for (const auto& d : diag) spdlog::warn("{}", d);
      for (std::size_t i = 0; i < v.size(); ++i)
        rows.push_back({conv.id, i, conv.utterances[i].speaker_id, v[i]});
      std::filesystem::path path = conv.audio->path;
      if (path.is_relative()) path = conv.source.parent_path() / path;
      std::set<int> chans;
      for (const auto& [sp, ch] : conv.audio->channel_map) chans.insert(ch);
      if (chans.empty()) chans.insert(0);
      for (int ch : chans) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f",
                      entrain::estimate_snr(entrain::read_audio(path, ch)));
        snr << conv.id << ',' << ch << ',' << buf << '\n';
      }
    } catch (const entrain::Error& e) {
      spdlog::error("{}: {}", conv.id, e.what());
      ++failed;
    }
  }
  entrain::write_feature_dump(std::filesystem::path(dir) / "features.csv", rows);
  return (failed || rejected) ? 1 : 0;
}

int cmd_run(Options& o, std::vector<std::string> default_formats) {
  const RunConfig c = finish_config(o, std::move(default_formats));
  const auto bundle = entrain::run_pipeline(c);
  for (const auto& d : bundle.diagnostics) spdlog::debug("{}", d);
  for (const auto& p : entrain::emit(bundle, c.output_dir, c.formats))
    spdlog::info("wrote {}", p.string());
  for (const auto& m : bundle.manifest)
    spdlog::warn("{} {} {}: {}", m.status, m.conversation, m.stage, m.message);
  return bundle.has_failures() ? 1 : 0;
}

int cmd_synth(Options& o) {
  if (o.out.empty()) throw CLI::ValidationError("synth needs --out");
  entrain::SynthSpec spec;
  spec.turns = o.turns;
  spec.seed = o.run.seed;
  spec.csw.p_a = spec.csw.p_b = o.csw_p;
  spec.csw.entrain = o.csw_entrain;
  spec.lexical.topic_rate = o.topic_rate;
  // Default features: every prosody key, null unless injected.
  std::map<std::string, entrain::FeatureSpec> feats;
  for (auto f : entrain::all_prosody_features()) {
    entrain::FeatureSpec fs;
    fs.name = std::string(entrain::feature_key(f));
    fs.speaker_offset_sd = 0.5;
    feats[fs.name] = fs;
  }
  for (const auto& item : o.inject) {
    // feature=INJECTION:magnitude
    const auto eq = item.find('=');
    const auto colon = item.find(':', eq);
    if (eq == std::string::npos || colon == std::string::npos)
      throw CLI::ValidationError("--inject wants feature=INJECTION:magnitude");
    const std::string name = item.substr(0, eq);
    auto inj = entrain::parse_injection(item.substr(eq + 1, colon - eq - 1));
    if (!inj) throw CLI::ValidationError("unknown injection in " + item);
    auto& fs = feats[name];
    fs.name = name;
    fs.injection = *inj;
    fs.magnitude = std::stod(item.substr(colon + 1));
    if (*inj == entrain::Injection::kConvergence) fs.mean_b = fs.mean_a + 3.0;
  }
  for (auto& [k, f] : feats) spec.features.push_back(f);

  entrain::SynthCorpus sc;
  for (std::size_t i = 0; i < o.conversations; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "synth%03zu", i);
    entrain::SynthSpec s = spec;
    s.seed = entrain::derive_seed(spec.seed, id);
    if (i < o.same_gender) {
      s.gender_a = s.gender_b = i % 2 ? entrain::Gender::kMale : entrain::Gender::kFemale;
    }
    sc.conversations.push_back(entrain::generate(s, id));
    sc.corpus.conversations.push_back(sc.conversations.back().conversation);
  }
  entrain::write_corpus(sc.corpus, o.out);
  entrain::write_feature_dump(std::filesystem::path(o.out) / "features.csv",
                              sc.feature_rows());
  spdlog::info("wrote {} synthetic conversations to {}", o.conversations, o.out);

  if (!o.sweep_out.empty()) {
    entrain::SweepGrid g;
    g.feature.name = "sweep";
    g.feature.mean_b = 4.0;
    g.injections = {entrain::Injection::kProximity, entrain::Injection::kConvergence,
                    entrain::Injection::kSynchrony};
    g.magnitudes = {0.0, 0.2, 0.4, 0.6, 0.8, 0.95};
    g.turns = o.turns;
    g.seeds = 100;
    g.base_seed = o.run.seed;
    g.alpha = o.run.alpha;
    std::ofstream out(o.sweep_out);
    out << "injection,magnitude,measure,trials,detected,rate\n";
    for (const auto& c : entrain::sweep(g)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%g,%s,%zu,%zu,%.4f", c.magnitude,
                    std::string(entrain::measure_name(c.measure)).c_str(),
                    c.trials, c.detected, c.rate());
      out << entrain::injection_name(c.injection) << ',' << buf << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::info);
  spdlog::cfg::load_env_levels();  // SPDLOG_LEVEL=debug etc.
  if (const char* lvl = std::getenv("ENTRAIN_LOG_LEVEL"))
    spdlog::set_level(spdlog::level::from_str(lvl));

  CLI::App app{"Entrainment analysis for code-switched dyadic speech"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file with any long option");
  Options o;
  app.add_option("--seed", o.run.seed, "Base seed");
  app.add_option("--alpha", o.run.alpha, "Significance level")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--format", o.formats, "csv, jsonl, md (comma-separated)");
  app.add_option("--corpus", o.corpus, "Corpus directory (interchange format)");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--features", o.features, "Per-utterance prosody dump");
  app.add_option("--cues", o.cues, "Affirmative cue lexicon");
  app.add_option("--fillers", o.fillers, "Filled pause lexicon");
  app.add_option("--overrides", o.overrides, "Manual strategy labels (JSONL)");
  app.add_option("--sync", o.sync, "Synchrony pairs: first, second or both");
  app.add_option("--other-sample", o.run.other_sample,
                 "Non-adjacent turns per target for turn proximity");
  app.add_flag("--no-audio", o.no_audio, "Do not read audio");
  app.add_flag("--no-thirds", o.no_thirds, "Skip the thirds analysis");
  app.add_flag("--no-lexical", o.no_lexical, "Skip lexical entrainment");
  app.add_flag("--no-csw", o.no_csw, "Skip CSW entrainment");
  app.add_flag("--no-prosody", o.no_prosody, "Skip prosodic entrainment");
  app.fallthrough();

  auto* ingest = app.add_subcommand("ingest", "Convert a released corpus");
  ingest->add_option("--from", o.from, "Source format (bangor)");
  ingest->add_option("--in", o.in, "Directory of source transcripts");
  ingest->add_option("--l1", o.l1, "Language code mapped to l1");
  ingest->add_option("--l2", o.l2, "Language code mapped to l2");
  auto* csw = app.add_subcommand("csw", "Per-utterance CSW features and distribution");
  auto* prosody = app.add_subcommand("prosody", "Prosody dump and SNR from corpus audio");
  auto* ent = app.add_subcommand("entrain", "Run every entrainment measure");
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--conversations", o.conversations, "Number of dyads");
  synth->add_option("--turns", o.turns, "Turns per dyad");
  synth->add_option("--inject", o.inject, "feature=INJECTION:magnitude");
  synth->add_option("--csw-p", o.csw_p, "Per-turn switch probability");
  synth->add_flag("--csw-entrain", o.csw_entrain, "Couple switching to the previous turn");
  synth->add_option("--topic-rate", o.topic_rate, "Share of topic words");
  synth->add_option("--same-gender", o.same_gender, "Same-gender dyads first");
  synth->add_option("--sweep", o.sweep_out, "Also write a detector sweep CSV");
  auto* report = app.add_subcommand("report", "Run the pipeline and write all tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*ingest) return cmd_ingest(o);
    if (*csw) return cmd_csw(o);
    if (*prosody) return cmd_prosody(o);
    if (*ent) return cmd_run(o, {"csv"});
    if (*synth) return cmd_synth(o);
    if (*report) return cmd_run(o, {"csv", "jsonl", "md"});
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 2;
}
