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

#include "entrain/lexicon.h"

#include <fstream>
#include <sstream>

#include "entrain/error.h"
#include "entrain/text.h"

namespace entrain {

Lexicon Lexicon::parse(std::istream& in, const std::string& source_name) {
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    auto words = split_whitespace(line);
    if (words.empty()) continue;
    std::vector<std::string> variants(words.begin() + 1, words.end());
    if (normalize_word(words[0]).empty())
      throw CorpusError(source_name, line_no,
                        "lexicon entry '" + words[0] + "' has no letters");
    lex.add(words[0], variants);
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon " + path.string());
  return parse(in, path.string());
}

void Lexicon::add(std::string_view canonical,
                  const std::vector<std::string>& variants) {
  const std::string c = normalize_word(canonical);
  if (c.empty()) return;
  members_.insert(c);
  forms_[c] = c;
  for (const auto& v : variants) {
    const std::string n = normalize_word(v);
    if (!n.empty() && !members_.count(n)) forms_[n] = c;
  }
}

std::optional<std::string> Lexicon::canonical(std::string_view word) const {
  auto it = forms_.find(std::string(word));
  if (it == forms_.end()) return std::nullopt;
  return it->second;
}

Lexicon Lexicon::merged_with(const Lexicon& other) const {
  Lexicon out = *this;
  for (const auto& [form, canon] : other.forms_) {
    out.members_.insert(canon);
    if (!out.forms_.count(form)) out.forms_[form] = canon;
  }
  return out;
}

Lexicon default_cues() {
  Lexicon lex;
  lex.add("alright", {"allright", "aight"});
  lex.add("gotcha", {"gotchu"});
  lex.add("huh");
  lex.add("mm-hm", {"mhm", "mm-hmm", "mmhm", "mhmm"});
  lex.add("okay", {"ok", "okey", "o.k", "kay"});
  lex.add("right");
  lex.add("uh-huh", {"uhuh", "aha", "uh-hum", "uhhuh"});
  lex.add("yeah", {"yah", "yea", "yeh"});
  lex.add("yep", {"yeap"});
  lex.add("yes");
  lex.add("yup");
  lex.add("aja", {"ajá", "ajah"});
  lex.add("claro");
  lex.add("dale");
  lex.add("ooh", {"oooh"});
  lex.add("sí");
  lex.add("vale");
  lex.add("venga");
  return lex;
}

Lexicon default_fillers() {
  Lexicon lex;
  lex.add("ah", {"ahh", "ahhh"});
  lex.add("ahem");
  lex.add("ay", {"ayy", "ayyy"});
  lex.add("eh", {"ehh", "ehhh"});
  lex.add("ehm", {"ehmm", "em", "emm"});
  lex.add("er", {"err", "errr"});
  lex.add("hmm", {"hm", "hmmm"});
  lex.add("hmf", {"hmph"});
  lex.add("mm", {"mmm", "mmmm"});
  lex.add("pues", {"pos", "pue"});
  lex.add("uff", {"uf", "ufff"});
  lex.add("uh", {"uhh", "uhhh"});
  lex.add("um", {"umm", "ummm"});
  return lex;
}

}  // namespace entrain
