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

#ifndef ENTRAIN_RNG_H_
#define ENTRAIN_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace entrain {

// Seeded generator whose output is identical on every platform: a
// std::mt19937_64 engine with hand-written distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of precision.
  double uniform();
  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n);
  double normal(double mean = 0.0, double sd = 1.0);
  bool bernoulli(double p) { return uniform() < p; }
  double gamma(double shape);
  std::vector<double> dirichlet(const std::vector<double>& alpha);
  std::size_t categorical(const std::vector<double>& probs);

  // k distinct indices from [0, n), in draw order. Returns all n (shuffled)
  // when k >= n.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Stable per-cell seed: mixes a base seed with any number of string keys.
std::uint64_t derive_seed(std::uint64_t base, std::string_view key);
std::uint64_t derive_seed(std::uint64_t base, std::string_view key1,
                          std::string_view key2);

}  // namespace entrain

#endif  // ENTRAIN_RNG_H_
