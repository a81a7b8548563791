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

#ifndef ENTRAIN_STATS_H_
#define ENTRAIN_STATS_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace entrain {

inline constexpr double kDefaultAlpha = 0.05;

struct StatResult {
  double statistic = 0.0;  // t or r
  double p = 1.0;          // two-sided
  double df = 0.0;
  std::size_t n = 0;
};

// Two-sided p-value of a Student t statistic.
double student_t_p(double t, double df);

double mean(std::span<const double> x);
// Sample (n - 1) standard deviation. Needs n >= 2.
double sample_sd(std::span<const double> x);

// Paired t-test on a - b. Throws DegenerateError when n < 2 or every
// difference is identical (the sample sd of the differences is zero).
StatResult paired_ttest(std::span<const double> a, std::span<const double> b);

// One-sample t-test of mean(x) against mu.
StatResult one_sample_ttest(std::span<const double> x, double mu = 0.0);

// Pearson r with p from t = r * sqrt((n - 2) / (1 - r^2)) on n - 2 df.
// Throws DegenerateError for n < 3 or a constant input.
StatResult pearson(std::span<const double> x, std::span<const double> y);

struct RankTestResult {
  double p = 1.0;
  std::size_t n = 0;       // comparisons
  std::size_t as_good = 0; // comparisons at least as favourable as the target
};

// One-sided Monte Carlo style rank test of target scores against reference
// scores: p = (1 + #{reference at least as favourable}) / (1 + n), pooled
// over every (target, its references) group. `lower_is_better` flips the
// direction.
RankTestResult rank_test(
    const std::vector<std::pair<double, std::vector<double>>>& groups,
    bool lower_is_better);

enum class Strength { kStrong, kModerate, kWeak, kZero };

struct StrengthLabel {
  Strength strength = Strength::kZero;
  int direction = 0;  // +1, -1, or 0 for r == 0

  // "STRONG_POSITIVE", "WEAK_NEGATIVE", "ZERO"
  std::string_view name() const;
  bool operator==(const StrengthLabel&) const = default;
};

// |r| >= 0.7 strong, [0.5, 0.7) moderate, (0, 0.5) weak.
StrengthLabel strength_label(double r);

}  // namespace entrain

#endif  // ENTRAIN_STATS_H_
