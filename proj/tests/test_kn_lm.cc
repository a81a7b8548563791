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

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "entrain/error.h"
#include "entrain/kn_lm.h"
#include "entrain/rng.h"
#include "entrain/text.h"

using namespace entrain;

namespace {

// Straightforward string-keyed interpolated Kneser-Ney, written from the
// model definition independently of the library's id-packed tables.
class OracleKn {
 public:
  OracleKn(const std::vector<Sentence>& text, bool mark_end) {
    for (const auto& s : text) {
      std::vector<std::string> seq = {"<s>"};
      seq.insert(seq.end(), s.begin(), s.end());
      if (mark_end) seq.push_back("</s>");
      for (std::size_t i = 1; i < seq.size(); ++i) {
        vocab_.insert(seq[i]);
        raw2_[{seq[i - 1], seq[i]}]++;
      }
      for (std::size_t i = 2; i < seq.size(); ++i)
        c3_[{seq[i - 2], seq[i - 1], seq[i]}]++;
    }
    std::map<std::pair<std::string, std::string>, std::set<std::string>> left2;
    for (const auto& [k, c] : c3_) left2[{std::get<1>(k), std::get<2>(k)}].insert(std::get<0>(k));
    for (const auto& [k, c] : raw2_) {
      if (k.first == "<s>") c2_[k] = c;
    }
    for (const auto& [k, lefts] : left2) c2_[k] = static_cast<long>(lefts.size());
    std::map<std::string, std::set<std::string>> left1;
    for (const auto& [k, c] : raw2_) left1[k.second].insert(k.first);
    for (const auto& [w, lefts] : left1) c1_[w] = static_cast<long>(lefts.size());

    d3_ = discount(c3_);
    d2_ = discount(c2_);
    d1_ = discount(c1_);
    for (const auto& [w, c] : c1_) t1_ += c;
    t1_ += 1;  // <unk>
    types1_ = static_cast<long>(c1_.size()) + 1;
  }

  double p1(const std::string& w) const {
    const double v = static_cast<double>(vocab_.size());
    double c = 0.0;
    if (vocab_.count(w)) c = static_cast<double>(c1_.at(w));
    else if (w != "<s>") c = 1.0;
    return std::max(c - d1_, 0.0) / static_cast<double>(t1_) +
           d1_ * static_cast<double>(types1_) / static_cast<double>(t1_) / (v + 1.0);
  }

  double p2(const std::string& v, const std::string& w) const {
    double total = 0.0, types = 0.0, c = 0.0;
    for (const auto& [k, n] : c2_) {
      if (k.first != v) continue;
      total += static_cast<double>(n);
      types += 1.0;
      if (k.second == w) c = static_cast<double>(n);
    }
    if (total == 0.0) return p1(w);
    return std::max(c - d2_, 0.0) / total + d2_ * types / total * p1(w);
  }

  double p3(const std::string& u, const std::string& v, const std::string& w) const {
    double total = 0.0, types = 0.0, c = 0.0;
    for (const auto& [k, n] : c3_) {
      if (std::get<0>(k) != u || std::get<1>(k) != v) continue;
      total += static_cast<double>(n);
      types += 1.0;
      if (std::get<2>(k) == w) c = static_cast<double>(n);
    }
    if (total == 0.0) return p2(v, w);
    return std::max(c - d3_, 0.0) / total + d3_ * types / total * p2(v, w);
  }

  const std::set<std::string>& vocab() const { return vocab_; }

 private:
  template <typename M>
  static double discount(const M& m) {
    double n1 = 0, n2 = 0;
    for (const auto& [k, c] : m) {
      n1 += c == 1;
      n2 += c == 2;
    }
    return n1 == 0 ? 0.5 : n1 / (n1 + 2 * n2);
  }

  std::set<std::string> vocab_;
  std::map<std::pair<std::string, std::string>, long> raw2_;
  std::map<std::tuple<std::string, std::string, std::string>, long> c3_;
  std::map<std::pair<std::string, std::string>, long> c2_;
  std::map<std::string, long> c1_;
  double d1_ = 0, d2_ = 0, d3_ = 0;
  long t1_ = 0, types1_ = 0;
};

std::vector<Sentence> toy() {
  return {split_whitespace("the cat sat on the mat"),
          split_whitespace("the dog sat"),
          split_whitespace("a cat and a dog sat on a mat")};
}

// Backoff evaluation of a textual n-gram dump.
class ArpaModel {
 public:
  explicit ArpaModel(std::istream& in) {
    std::string line;
    int order = 0;
    while (std::getline(in, line)) {
      if (line.starts_with("\\") && line.find("-grams:") != std::string::npos) {
        order = line[1] - '0';
        continue;
      }
      if (order == 0 || line.empty() || line.starts_with("\\")) continue;
      std::istringstream fields(line);
      std::string lp;
      std::getline(fields, lp, '\t');
      std::string gram;
      std::getline(fields, gram, '\t');
      std::string bow;
      const bool has_bow = static_cast<bool>(std::getline(fields, bow, '\t'));
      prob_[gram] = std::stod(lp);
      if (has_bow) bow_[gram] = std::stod(bow);
    }
  }
  double log10p(const std::vector<std::string>& ctx, const std::string& w) const {
    std::string gram;
    for (const auto& c : ctx) gram += c + " ";
    gram += w;
    if (auto it = prob_.find(gram); it != prob_.end()) return it->second;
    if (ctx.empty()) return prob_.at("<unk>");
    std::string hist;
    for (std::size_t i = 0; i < ctx.size(); ++i) hist += (i ? " " : "") + ctx[i];
    double b = 0.0;
    if (auto it = bow_.find(hist); it != bow_.end()) b = it->second;
    return b + log10p({ctx.begin() + 1, ctx.end()}, w);
  }

 private:
  std::map<std::string, double> prob_;
  std::map<std::string, double> bow_;
};

}  // namespace

TEST_CASE("hand-computed probabilities on a four-token corpus") {
  // <s> a a a a: trigram counts {<s>aa:1, aaa:2} -> D3 = 1/3; bigram counts
  // {<s>a:1, aa:2} -> D2 = 1/3; unigram continuation count of a is 2 -> D1
  // falls back to 0.5. p1(a) = 1.5/3 + 0.5*2/3*1/2 = 2/3,
  // p2(a|a) = 5/6 + 1/6 * 2/3 = 17/18, p3(a|a a) = 5/6 + 1/6 * 17/18.
  auto lm = TrigramLm::train({{"a", "a", "a", "a"}}, {.mark_sentence_end = false});
  CHECK(lm.discount(3) == doctest::Approx(1.0 / 3.0));
  CHECK(lm.discount(2) == doctest::Approx(1.0 / 3.0));
  CHECK(lm.discount(1) == 0.5);
  CHECK(std::abs(lm.prob("a", {}) - 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(lm.prob("a", {"a"}) - 17.0 / 18.0) < 1e-12);
  const double p3 = 5.0 / 6.0 + 1.0 / 6.0 * 17.0 / 18.0;
  CHECK(std::abs(lm.prob("a", {"a", "a"}) - p3) < 1e-12);
  CHECK(lm.prob("a", {"a", "a"}) >= 0.9);
  // <unk>: 0.5 / 3 + 1/6; with p1(a) the unigram level sums to one.
  CHECK(std::abs(lm.prob("zzz", {}) - 1.0 / 3.0) < 1e-12);
}

TEST_CASE("matches an independent implementation on a toy corpus") {
  for (bool mark : {true, false}) {
    const auto text = toy();
    auto lm = TrigramLm::train(text, {.mark_sentence_end = mark});
    OracleKn oracle(text, mark);
    std::vector<std::string> words(oracle.vocab().begin(), oracle.vocab().end());
    words.push_back("unseen");
    std::vector<std::string> ctx = words;
    ctx.push_back("<s>");
    for (const auto& w : words) {
      CHECK(std::abs(lm.prob(w, {}) - oracle.p1(w)) < 1e-9);
      for (const auto& v : ctx) {
        CHECK(std::abs(lm.prob(w, {v}) - oracle.p2(v, w)) < 1e-9);
        for (const auto& u : ctx)
          CHECK(std::abs(lm.prob(w, {u, v}) - oracle.p3(u, v, w)) < 1e-9);
      }
    }
  }
}

TEST_CASE("distributions sum to one over vocabulary and <unk>") {
  auto lm = TrigramLm::train(toy());
  auto vocab = lm.vocabulary();
  std::vector<std::string> ctx = vocab;
  ctx.push_back("<s>");
  ctx.push_back("never");
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    std::vector<std::string> h;
    const auto len = rng.uniform_int(3);
    for (std::uint64_t k = 0; k < len; ++k) h.push_back(ctx[rng.uniform_int(ctx.size())]);
    double sum = lm.prob("<unk>", h);
    for (const auto& w : vocab) sum += lm.prob(w, h);
    CHECK(std::abs(sum - 1.0) < 1e-6);
  }
}

TEST_CASE("unseen history backs off through the chain") {
  auto lm = TrigramLm::train(toy());
  // "mat sat" never occurs, so the trigram level passes straight to p(w|sat).
  for (const auto& w : lm.vocabulary())
    CHECK(lm.prob(w, {"mat", "sat"}) == doctest::Approx(lm.prob(w, {"sat"})));
  // An unknown last word has no bigram statistics either.
  for (const auto& w : lm.vocabulary())
    CHECK(lm.prob(w, {"nope"}) == doctest::Approx(lm.prob(w, {})));
}

TEST_CASE("dump evaluated with ordinary backoff reproduces the model") {
  auto lm = TrigramLm::train(toy());
  std::stringstream arpa;
  lm.write_arpa(arpa);
  ArpaModel back(arpa);
  auto vocab = lm.vocabulary();
  std::vector<std::string> ctx = vocab;
  ctx.push_back("<s>");
  for (const auto& w : vocab) {
    CHECK(std::abs(back.log10p({}, w) - std::log10(lm.prob(w, {}))) < 1e-6);
    for (const auto& v : ctx) {
      CHECK(std::abs(back.log10p({v}, w) - std::log10(lm.prob(w, {v}))) < 1e-6);
      for (const auto& u : ctx) {
        if (u == "</s>" || v == "</s>") continue;
        CHECK(std::abs(back.log10p({u, v}, w) - std::log10(lm.prob(w, {u, v}))) < 1e-6);
      }
    }
  }
}

TEST_CASE("perplexity") {
  auto text = toy();
  auto lm = TrigramLm::train(text);
  // Same vocabulary, scrambled order.
  std::vector<Sentence> reversed;
  for (auto s : text) {
    std::reverse(s.begin(), s.end());
    reversed.push_back(s);
  }
  CHECK(perplexity(lm, text, true).perplexity < perplexity(lm, reversed, true).perplexity);

  for (std::size_t v : {1u, 2u, 7u, 100u, 1000u}) {
    std::vector<std::string> vocab;
    for (std::size_t i = 0; i < v; ++i) vocab.push_back("w" + std::to_string(i));
    auto uni = TrigramLm::uniform(vocab);
    std::vector<Sentence> sample = {{vocab.front(), vocab.back()}, {vocab[v / 2]}};
    CHECK(perplexity(uni, sample, false).perplexity == static_cast<double>(v));
    CHECK(uni.prob("<unk>", {}) == 0.0);
  }

  auto oov = perplexity(lm, {{"the", "zebra", "sat"}}, false);
  CHECK(oov.skipped == 1);
  CHECK(oov.scored == 3);  // the, sat, </s>
  auto no_end = TrigramLm::train(text, {.mark_sentence_end = false});
  CHECK_THROWS_AS(perplexity(no_end, {{"zebra", "quagga"}}, false), DegenerateError);
  CHECK_THROWS_AS(TrigramLm::train({}), Error);
}
