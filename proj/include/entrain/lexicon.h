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

#ifndef ENTRAIN_LEXICON_H_
#define ENTRAIN_LEXICON_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace entrain {

// A word list with spelling variants. Each entry has one canonical form and
// any number of variants that count as that form ("uhuh" -> "uh-huh").
//
// File format: one entry per line, canonical form first, variants after it
// separated by whitespace. Text after '#' is a comment.
class Lexicon {
 public:
  Lexicon() = default;

  static Lexicon parse(std::istream& in, const std::string& source_name);
  static Lexicon load(const std::filesystem::path& path);

  void add(std::string_view canonical,
           const std::vector<std::string>& variants = {});

  // Canonical form of a (normalized) word, if it is a member or variant.
  std::optional<std::string> canonical(std::string_view word) const;
  bool contains(std::string_view word) const {
    return canonical(word).has_value();
  }

  const std::set<std::string>& members() const { return members_; }
  const std::map<std::string, std::string>& forms() const { return forms_; }
  bool empty() const { return members_.empty(); }

  Lexicon merged_with(const Lexicon& other) const;

 private:
  std::set<std::string> members_;
  std::map<std::string, std::string> forms_;  // any form -> canonical
};

// Affirmative cue words and filled pauses, English and Spanish, with common
// spelling variants.
Lexicon default_cues();
Lexicon default_fillers();

}  // namespace entrain

#endif  // ENTRAIN_LEXICON_H_
