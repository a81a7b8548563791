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

#include "entrain/kn_lm.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include "entrain/error.h"

namespace entrain {

namespace {

constexpr int kStartId = 0;
constexpr int kUnkId = 1;

std::uint64_t key2(int a, int b) {
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

std::uint64_t key3(int a, int b, int c) {
  return (static_cast<std::uint64_t>(a) << 42) |
         (static_cast<std::uint64_t>(b) << 21) | static_cast<std::uint64_t>(c);
}

template <typename Map>
double kn_discount(const Map& counts) {
  long n1 = 0;
  long n2 = 0;
  for (const auto& [k, c] : counts) {
    if (c == 1) ++n1;
    if (c == 2) ++n2;
  }
  if (n1 == 0) return 0.5;
  return static_cast<double>(n1) / static_cast<double>(n1 + 2 * n2);
}

std::string fmt_log10(double p) {
  char buf[32];
  if (p <= 0.0) return "-99";
  std::snprintf(buf, sizeof buf, "%.7f", std::log10(p));
  return buf;
}

}  // namespace

TrigramLm TrigramLm::train(const std::vector<Sentence>& text,
                           const TrainOptions& opts) {
  TrigramLm lm;
  lm.mark_end_ = opts.mark_sentence_end;
  lm.words_ = {std::string(kSentenceStart), std::string(kUnknownWord)};
  lm.ids_[lm.words_[0]] = kStartId;
  lm.ids_[lm.words_[1]] = kUnkId;

  // Ids follow sorted word order so the model does not depend on input
  // order beyond the counts.
  std::set<std::string> types;
  for (const auto& s : text) types.insert(s.begin(), s.end());
  types.erase(std::string(kSentenceStart));
  types.erase(std::string(kUnknownWord));
  if (lm.mark_end_) types.insert(std::string(kSentenceEnd));
  for (const auto& w : types) {
    lm.ids_[w] = static_cast<int>(lm.words_.size());
    lm.words_.push_back(w);
  }
  if (lm.words_.size() >= (1u << 21)) throw Error("vocabulary too large");

  std::size_t tokens = 0;
  std::map<std::uint64_t, long> raw_bigram;
  for (const auto& s : text) {
    std::vector<int> ids = {kStartId};
    for (const auto& w : s) {
      if (w == kSentenceStart || w == kUnknownWord) continue;
      ids.push_back(lm.ids_.at(w));
    }
    if (lm.mark_end_) ids.push_back(lm.ids_.at(std::string(kSentenceEnd)));
    tokens += ids.size() - 1;
    for (std::size_t i = 1; i < ids.size(); ++i)
      ++raw_bigram[key2(ids[i - 1], ids[i])];
    for (std::size_t i = 2; i < ids.size(); ++i)
      ++lm.trigram_[key3(ids[i - 2], ids[i - 1], ids[i])];
  }
  if (tokens == 0) throw Error("cannot train a language model on empty text");

  // Order 2: continuation counts N1+(. v w), raw counts after <s>.
  for (const auto& [k, c] : raw_bigram) {
    if ((k >> 32) == static_cast<std::uint64_t>(kStartId)) lm.bigram_[k] = c;
  }
  for (const auto& [k, c] : lm.trigram_) {
    const int v = static_cast<int>((k >> 21) & 0x1FFFFF);
    const int w = static_cast<int>(k & 0x1FFFFF);
    ++lm.bigram_[key2(v, w)];
  }
  for (const auto& [k, c] : lm.trigram_) {
    auto& h = lm.trigram_hist_[k >> 21];
    h.total += c;
    ++h.types;
  }
  for (const auto& [k, c] : lm.bigram_) {
    auto& h = lm.bigram_hist_[static_cast<int>(k >> 32)];
    h.total += c;
    ++h.types;
  }

  // Order 1: continuation counts N1+(. w).
  lm.unigram_.assign(lm.words_.size(), 0);
  for (const auto& [k, c] : raw_bigram)
    ++lm.unigram_[static_cast<std::size_t>(k & 0xFFFFFFFF)];
  std::map<int, long> unigram_nonzero;
  for (std::size_t i = 0; i < lm.unigram_.size(); ++i) {
    if (lm.unigram_[i] > 0) {
      unigram_nonzero[static_cast<int>(i)] = lm.unigram_[i];
      lm.unigram_total_ += lm.unigram_[i];
      ++lm.unigram_types_;
    }
  }
  lm.unigram_[kUnkId] = 1;
  lm.unigram_total_ += 1;
  lm.unigram_types_ += 1;
  lm.predictable_ = static_cast<long>(lm.words_.size()) - 2;

  lm.discount_[0] = kn_discount(unigram_nonzero);
  lm.discount_[1] = kn_discount(lm.bigram_);
  lm.discount_[2] = kn_discount(lm.trigram_);
  return lm;
}

TrigramLm TrigramLm::uniform(const std::vector<std::string>& vocab) {
  std::set<std::string> types(vocab.begin(), vocab.end());
  types.erase(std::string(kSentenceStart));
  types.erase(std::string(kUnknownWord));
  if (types.empty()) throw Error("uniform model needs a vocabulary");
  TrigramLm lm;
  lm.uniform_ = true;
  lm.mark_end_ = types.count(std::string(kSentenceEnd)) > 0;
  lm.words_ = {std::string(kSentenceStart), std::string(kUnknownWord)};
  lm.ids_[lm.words_[0]] = kStartId;
  lm.ids_[lm.words_[1]] = kUnkId;
  for (const auto& w : types) {
    lm.ids_[w] = static_cast<int>(lm.words_.size());
    lm.words_.push_back(w);
  }
  lm.predictable_ = static_cast<long>(types.size());
  return lm;
}

int TrigramLm::id_of(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  return it == ids_.end() ? kUnkId : it->second;
}

bool TrigramLm::in_vocabulary(std::string_view word) const {
  const int id = id_of(word);
  return id != kUnkId && id != kStartId;
}

std::vector<std::string> TrigramLm::vocabulary() const {
  return std::vector<std::string>(words_.begin() + 2, words_.end());
}

double TrigramLm::p1(int w) const {
  if (uniform_) return w == kUnkId ? 0.0 : 1.0 / static_cast<double>(predictable_);
  if (w == kStartId) return 0.0;
  const double d = discount_[0];
  const auto total = static_cast<double>(unigram_total_);
  const double c = static_cast<double>(unigram_[static_cast<std::size_t>(w)]);
  return std::max(c - d, 0.0) / total +
         d * static_cast<double>(unigram_types_) / total /
             static_cast<double>(predictable_ + 1);
}

double TrigramLm::gamma2(int v) const {
  auto h = bigram_hist_.find(v);
  if (h == bigram_hist_.end()) return 1.0;
  return discount_[1] * static_cast<double>(h->second.types) /
         static_cast<double>(h->second.total);
}

double TrigramLm::gamma3(int u, int v) const {
  auto h = trigram_hist_.find(key3(u, v, 0) >> 21);
  if (h == trigram_hist_.end()) return 1.0;
  return discount_[2] * static_cast<double>(h->second.types) /
         static_cast<double>(h->second.total);
}

double TrigramLm::p2(int v, int w) const {
  auto h = bigram_hist_.find(v);
  if (h == bigram_hist_.end()) return p1(w);
  auto c = bigram_.find(key2(v, w));
  const double count = c == bigram_.end() ? 0.0 : static_cast<double>(c->second);
  return std::max(count - discount_[1], 0.0) /
             static_cast<double>(h->second.total) +
         gamma2(v) * p1(w);
}

double TrigramLm::p3(int u, int v, int w) const {
  auto h = trigram_hist_.find(key3(u, v, 0) >> 21);
  if (h == trigram_hist_.end()) return p2(v, w);
  auto c = trigram_.find(key3(u, v, w));
  const double count =
      c == trigram_.end() ? 0.0 : static_cast<double>(c->second);
  return std::max(count - discount_[2], 0.0) /
             static_cast<double>(h->second.total) +
         gamma3(u, v) * p2(v, w);
}

double TrigramLm::prob(std::string_view word,
                       const std::vector<std::string>& history) const {
  if (word == kSentenceStart) return 0.0;
  const int w = id_of(word);
  if (uniform_) return p1(w);
  if (history.empty()) return p1(w);
  const int v = id_of(history.back());
  if (history.size() == 1) return p2(v, w);
  const int u = id_of(history[history.size() - 2]);
  return p3(u, v, w);
}

void TrigramLm::write_arpa(std::ostream& out) const {
  if (uniform_) {
    out << "\n\\data\\\nngram 1=" << predictable_ + 2 << "\n\n\\1-grams:\n";
    out << "-99\t<s>\n" << fmt_log10(0.0) << "\t<unk>\n";
    for (std::size_t i = 2; i < words_.size(); ++i)
      out << fmt_log10(p1(static_cast<int>(i))) << '\t' << words_[i] << '\n';
    out << "\n\\end\\\n";
    return;
  }
  // Sort entries by their word strings so the dump is stable.
  auto name = [&](int id) -> const std::string& {
    return words_[static_cast<std::size_t>(id)];
  };
  std::vector<std::pair<std::string, int>> uni;
  for (std::size_t i = 0; i < words_.size(); ++i)
    uni.emplace_back(words_[i], static_cast<int>(i));
  std::sort(uni.begin(), uni.end());

  std::vector<std::tuple<std::string, std::string, int, int>> bi;
  for (const auto& [k, c] : bigram_) {
    const int v = static_cast<int>(k >> 32);
    const int w = static_cast<int>(k & 0xFFFFFFFF);
    bi.emplace_back(name(v), name(w), v, w);
  }
  std::sort(bi.begin(), bi.end());

  std::vector<std::tuple<std::string, std::string, std::string, int, int, int>>
      tri;
  for (const auto& [k, c] : trigram_) {
    const int u = static_cast<int>(k >> 42);
    const int v = static_cast<int>((k >> 21) & 0x1FFFFF);
    const int w = static_cast<int>(k & 0x1FFFFF);
    tri.emplace_back(name(u), name(v), name(w), u, v, w);
  }
  std::sort(tri.begin(), tri.end());

  auto bow = [](double g) { return g == 1.0 ? std::string() : "\t" + fmt_log10(g); };
  out << "\n\\data\\\n";
  out << "ngram 1=" << uni.size() << "\n";
  out << "ngram 2=" << bi.size() << "\n";
  out << "ngram 3=" << tri.size() << "\n";
  out << "\n\\1-grams:\n";
  for (const auto& [word, id] : uni) {
    out << (id == kStartId ? std::string("-99") : fmt_log10(p1(id))) << '\t'
        << word << bow(gamma2(id)) << '\n';
  }
  out << "\n\\2-grams:\n";
  for (const auto& [sv, sw, v, w] : bi) {
    out << fmt_log10(p2(v, w)) << '\t' << sv << ' ' << sw
        << bow(gamma3(v, w)) << '\n';
  }
  out << "\n\\3-grams:\n";
  for (const auto& [su, sv, sw, u, v, w] : tri) {
    out << fmt_log10(p3(u, v, w)) << '\t' << su << ' ' << sv << ' ' << sw
        << '\n';
  }
  out << "\n\\end\\\n";
}

PerplexityResult perplexity(const TrigramLm& lm,
                            const std::vector<Sentence>& text,
                            bool include_oov) {
  PerplexityResult r;
  long double log_sum = 0.0L;
  auto score = [&](std::string_view w, const std::vector<std::string>& h) {
    const double p = lm.prob(w, h);
    if (!(p > 0.0))
      throw DegenerateError("word '" + std::string(w) +
                            "' has zero probability");
    log_sum += std::log(static_cast<long double>(p));
    ++r.scored;
  };
  for (const auto& s : text) {
    std::vector<std::string> history = {std::string(kSentenceStart)};
    for (const auto& w : s) {
      if (include_oov || lm.in_vocabulary(w)) {
        score(w, history);
      } else {
        ++r.skipped;
      }
      history.push_back(w);
      if (history.size() > 2) history.erase(history.begin());
    }
    if (lm.marks_sentence_end()) score(kSentenceEnd, history);
  }
  if (r.scored == 0) throw DegenerateError("no scorable words");
  r.perplexity = static_cast<double>(
      std::exp(-log_sum / static_cast<long double>(r.scored)));
  return r;
}

}  // namespace entrain
