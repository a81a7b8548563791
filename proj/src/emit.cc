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

#include "entrain/emit.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "entrain/error.h"
#include "entrain/lexical.h"
#include "entrain/prosody.h"
#include "json.hpp"

namespace entrain {

namespace {

using nlohmann::ordered_json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) {
  return v ? num(*v) : std::string();
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void csv_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << csv_cell(cells[i]);
  }
  out << '\n';
}

// Same rounding as the CSV cells.
ordered_json opt_json(const std::optional<double>& v) {
  return v ? ordered_json(std::stod(num(*v))) : ordered_json(nullptr);
}

std::string fixed(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Feature keys in table order: prosody, CSW, then the rest as they appear.
std::vector<std::string> ordered_features(const ResultBundle& b,
                                          const std::string& measure) {
  std::set<std::string> present;
  for (const auto& s : b.summaries)
    if (s.measure == measure) present.insert(s.feature);
  std::vector<std::string> out;
  for (auto f : all_prosody_features()) {
    std::string k(feature_key(f));
    if (present.count(k)) out.push_back(k);
  }
  for (const auto& k : csw_feature_keys())
    if (present.count(k)) out.push_back(k);
  for (const auto& k : lexical_feature_keys())
    if (present.count(k)) out.push_back(k);
  return out;
}

const SummaryRow* find_summary(const ResultBundle& b, const std::string& f,
                               const std::string& m, const std::string& scope) {
  for (const auto& s : b.summaries)
    if (s.feature == f && s.measure == m && s.scope == scope) return &s;
  return nullptr;
}

void pct_table(std::ostream& out, const ResultBundle& b, const std::string& title,
               const std::string& measure, const std::string& pct_header) {
  out << "## " << title << "\n\n";
  out << "| Feature | " << pct_header << " | t | p |\n";
  out << "|---|---|---|---|\n";
  for (const auto& f : ordered_features(b, measure)) {
    const auto* s = find_summary(b, f, measure, "corpus");
    out << table_row(feature_display_label(f), s->pct_detected, s->statistic,
                     s->p)
        << '\n';
  }
  out << '\n';
}

std::string cell_t_p(const SummaryRow* s) {
  if (s == nullptr || !s->statistic) return "N/A";
  std::string c = fixed(*s->statistic, 2);
  if (s->p) c += " (" + format_p(*s->p) + ")";
  return c;
}

}  // namespace

std::string feature_display_label(const std::string& key) {
  if (auto f = parse_prosody_feature(key)) return std::string(feature_label(*f));
  for (const auto& k : csw_feature_keys())
    if (k == key) return csw_feature_label(key);
  return lexical_feature_label(key);
}

std::string format_p(double p) {
  char buf[32];
  if (p >= 0.001) {
    std::snprintf(buf, sizeof buf, "%.3f", p);
  } else {
    std::snprintf(buf, sizeof buf, "%.2e", p);
  }
  return buf;
}

std::string format_pct(double pct) {
  std::string s = fixed(pct, 1);
  if (s.size() > 2 && s.compare(s.size() - 2, 2, ".0") == 0) s.resize(s.size() - 2);
  return s;
}

std::string table_row(const std::string& label, std::optional<double> pct,
                      std::optional<double> t, std::optional<double> p) {
  return "| " + label + " | " + (pct ? format_pct(*pct) : "N/A") + " | " +
         (t ? fixed(*t, 2) : "N/A") + " | " + (p ? format_p(*p) : "N/A") + " |";
}

void write_results_csv(std::ostream& out, const ResultBundle& b) {
  csv_line(out, {"conversation", "feature", "measure", "scope", "statistic", "p",
                 "n", "label", "seed", "status", "note"});
  for (const auto& r : b.results) {
    csv_line(out, {r.conversation, r.feature, r.measure, r.scope,
                   opt_num(r.statistic), opt_num(r.p), std::to_string(r.n),
                   r.label, r.seed ? std::to_string(*r.seed) : "", r.status,
                   r.note});
  }
}

void write_summary_csv(std::ostream& out, const ResultBundle& b) {
  csv_line(out, {"feature", "measure", "scope", "evaluated", "detected", "total",
                 "pct_detected", "statistic", "p", "n", "status", "note"});
  for (const auto& s : b.summaries) {
    csv_line(out, {s.feature, s.measure, s.scope, std::to_string(s.evaluated),
                   std::to_string(s.detected), std::to_string(s.total),
                   opt_num(s.pct_detected), opt_num(s.statistic), opt_num(s.p),
                   std::to_string(s.n), s.status, s.note});
  }
}

void write_gender_csv(std::ostream& out, const ResultBundle& b) {
  csv_line(out, {"feature", "measure", "same_pct", "mixed_pct", "same_detected",
                 "same_total", "mixed_detected", "mixed_total", "excluded"});
  for (const auto& g : b.gender) {
    csv_line(out, {g.feature, g.measure,
                   g.same_pct ? num(*g.same_pct) : "N/A",
                   g.mixed_pct ? num(*g.mixed_pct) : "N/A",
                   std::to_string(g.same_detected), std::to_string(g.same_total),
                   std::to_string(g.mixed_detected),
                   std::to_string(g.mixed_total), std::to_string(g.excluded)});
  }
}

void write_manifest_csv(std::ostream& out, const ResultBundle& b) {
  csv_line(out, {"conversation", "stage", "status", "message"});
  for (const auto& m : b.manifest)
    csv_line(out, {m.conversation, m.stage, m.status, m.message});
}

void write_results_jsonl(std::ostream& out, const ResultBundle& b) {
  for (const auto& r : b.results) {
    ordered_json j;
    j["conversation"] = r.conversation;
    j["feature"] = r.feature;
    j["measure"] = r.measure;
    j["scope"] = r.scope;
    j["statistic"] = opt_json(r.statistic);
    j["p"] = opt_json(r.p);
    j["n"] = r.n;
    j["label"] = r.label;
    j["seed"] = r.seed ? ordered_json(*r.seed) : ordered_json(nullptr);
    j["status"] = r.status;
    j["note"] = r.note;
    out << j.dump() << '\n';
  }
}

void write_summary_jsonl(std::ostream& out, const ResultBundle& b) {
  for (const auto& s : b.summaries) {
    ordered_json j;
    j["feature"] = s.feature;
    j["measure"] = s.measure;
    j["scope"] = s.scope;
    j["evaluated"] = s.evaluated;
    j["detected"] = s.detected;
    j["total"] = s.total;
    j["pct_detected"] = opt_json(s.pct_detected);
    j["statistic"] = opt_json(s.statistic);
    j["p"] = opt_json(s.p);
    j["n"] = s.n;
    j["status"] = s.status;
    j["note"] = s.note;
    out << j.dump() << '\n';
  }
}

void write_gender_jsonl(std::ostream& out, const ResultBundle& b) {
  for (const auto& g : b.gender) {
    ordered_json j;
    j["feature"] = g.feature;
    j["measure"] = g.measure;
    j["same_pct"] = opt_json(g.same_pct);
    j["mixed_pct"] = opt_json(g.mixed_pct);
    j["same_detected"] = g.same_detected;
    j["same_total"] = g.same_total;
    j["mixed_detected"] = g.mixed_detected;
    j["mixed_total"] = g.mixed_total;
    j["excluded"] = g.excluded;
    out << j.dump() << '\n';
  }
}

void write_manifest_jsonl(std::ostream& out, const ResultBundle& b) {
  for (const auto& m : b.manifest) {
    ordered_json j;
    j["conversation"] = m.conversation;
    j["stage"] = m.stage;
    j["status"] = m.status;
    j["message"] = m.message;
    out << j.dump() << '\n';
  }
}

void write_markdown(std::ostream& out, const ResultBundle& b) {
  out << "# Entrainment report\n\n";
  out << "- seed: " << b.seed << "\n- alpha: " << num(b.alpha)
      << "\n- conversations read: " << b.conversations_read
      << "\n- conversations analyzed: " << b.conversations_analyzed << "\n\n";

  out << "## Code-switching distribution\n\n";
  out << "| Monolingual % | Insertional % | Alternational % | Other % |\n";
  out << "|---|---|---|---|\n";
  if (b.csw_stats) {
    const auto& s = *b.csw_stats;
    out << "| " << format_pct(s.pct_monolingual()) << " | "
        << format_pct(s.pct_insertional()) << " | "
        << format_pct(s.pct_alternational()) << " | "
        << format_pct(s.pct_other()) << " |\n";
  }
  out << '\n';

  out << "## Audio quality\n\n";
  out << "| Conversations | Mean SNR (dB) | Median SNR (dB) | Above "
      << format_pct(kCleanSpeechSnrDb) << " dB | Reference (dB) |\n";
  out << "|---|---|---|---|---|\n";
  if (b.snr) {
    const auto& s = *b.snr;
    out << "| " << s.per_conversation.size() << " | " << fixed(*s.mean, 1)
        << " | " << fixed(*s.median, 1) << " | " << s.above_threshold << " | "
        << format_pct(s.reference_db) << " |\n";
  }
  out << '\n';

  pct_table(out, b, "Lexical entrainment", "LEXICAL", "% entraining");
  pct_table(out, b, "Turn-level proximity", "TURN_PROX", "% entraining");
  pct_table(out, b, "Turn-level convergence", "TURN_CONV", "% converging");
  pct_table(out, b, "Turn-level synchrony", "TURN_SYNC", "% synchronous");
  pct_table(out, b, "Conversation-level proximity", "CONV_PROX", "% proximate");

  out << "## Conversation-level convergence\n\n";
  out << "| Feature | t | p |\n|---|---|---|\n";
  for (const auto& f : ordered_features(b, "CONV_CONV")) {
    const auto* s = find_summary(b, f, "CONV_CONV", "corpus");
    out << "| " << feature_display_label(f) << " | "
        << (s->statistic ? fixed(*s->statistic, 2) : "N/A") << " | "
        << (s->p ? format_p(*s->p) : "N/A") << " |\n";
  }
  out << '\n';

  out << "## Thirds of the conversation\n\n";
  out << "| Feature | Measure | % third 1 | % third 2 | % third 3 | 1 vs 3 | 2 vs 3 |\n";
  out << "|---|---|---|---|---|---|---|\n";
  for (const char* m : {"TURN_PROX", "TURN_CONV", "TURN_SYNC"}) {
    for (const auto& f : ordered_features(b, m)) {
      const auto* t1 = find_summary(b, f, m, "third1");
      if (t1 == nullptr) continue;
      const auto* t2 = find_summary(b, f, m, "third2");
      const auto* t3 = find_summary(b, f, m, "third3");
      auto pct = [](const SummaryRow* s) {
        return s && s->pct_detected ? format_pct(*s->pct_detected) : "N/A";
      };
      out << "| " << feature_display_label(f) << " | " << m << " | " << pct(t1)
          << " | " << pct(t2) << " | " << pct(t3) << " | "
          << cell_t_p(find_summary(b, f, m, "third1_vs_third3")) << " | "
          << cell_t_p(find_summary(b, f, m, "third2_vs_third3")) << " |\n";
    }
  }
  out << '\n';

  out << "## Gender\n\n";
  std::vector<std::string> measures;
  for (const auto& g : b.gender) {
    if (std::find(measures.begin(), measures.end(), g.measure) == measures.end())
      measures.push_back(g.measure);
  }
  for (const auto& m : measures) {
    out << "### " << m << "\n\n| Feature | %w (FF+MM) | %w FM |\n|---|---|---|\n";
    for (const auto& g : b.gender) {
      if (g.measure != m) continue;
      out << "| " << feature_display_label(g.feature) << " | "
          << (g.same_pct ? format_pct(*g.same_pct) : "N/A") << " | "
          << (g.mixed_pct ? format_pct(*g.mixed_pct) : "N/A") << " |\n";
    }
    out << '\n';
  }

  out << "## Failures\n\n| Conversation | Stage | Status | Message |\n|---|---|---|---|\n";
  for (const auto& e : b.manifest)
    out << "| " << e.conversation << " | " << e.stage << " | " << e.status
        << " | " << e.message << " |\n";
}

std::vector<std::filesystem::path> emit(const ResultBundle& b,
                                        const std::filesystem::path& dir,
                                        const std::vector<std::string>& formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::string& name, auto&& fn) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    fn(out, b);
    if (!out) throw Error("write failed: " + path.string());
    written.push_back(path);
  };
  for (const auto& f : formats) {
    if (f == "csv") {
      write("results.csv", write_results_csv);
      write("summary.csv", write_summary_csv);
      write("gender.csv", write_gender_csv);
      write("manifest.csv", write_manifest_csv);
    } else if (f == "jsonl") {
      write("results.jsonl", write_results_jsonl);
      write("summary.jsonl", write_summary_jsonl);
      write("gender.jsonl", write_gender_jsonl);
      write("manifest.jsonl", write_manifest_jsonl);
    } else if (f == "md") {
      write("report.md", write_markdown);
    } else {
      throw ContractViolation("unknown format '" + f + "'");
    }
  }
  return written;
}

}  // namespace entrain
