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

#ifndef ENTRAIN_TEXT_H_
#define ENTRAIN_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace entrain {

std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

// Lower-cases ASCII and the Latin-1 supplement letters (Á -> á, Ñ -> ñ ...).
std::string fold_case(std::string_view text);

// Case-folds and strips leading/trailing punctuation. Word-internal hyphens
// and apostrophes survive ("uh-huh", "don't"). May return an empty string.
std::string normalize_word(std::string_view word);

bool is_letter(char32_t c);

std::string_view trim(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);

}  // namespace entrain

#endif  // ENTRAIN_TEXT_H_
