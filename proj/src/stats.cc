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

#include "entrain/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "entrain/error.h"

namespace entrain {

double student_t_p(double t, double df) {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  const boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(
                                 dist, std::abs(t))));
}

double mean(std::span<const double> x) {
  if (x.empty()) throw DegenerateError("mean of empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x) {
  if (x.size() < 2) throw DegenerateError("sd needs at least two values");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

namespace {

bool constant(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
}

}  // namespace

StatResult one_sample_ttest(std::span<const double> x, double mu) {
  if (x.size() < 2) throw DegenerateError("t-test needs at least two values");
  if (constant(x)) throw DegenerateError("degenerate pairs");
  const auto n = static_cast<double>(x.size());
  StatResult r;
  r.n = x.size();
  r.df = n - 1.0;
  r.statistic = (mean(x) - mu) / (sample_sd(x) / std::sqrt(n));
  r.p = student_t_p(r.statistic, r.df);
  return r;
}

StatResult paired_ttest(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw ContractViolation("paired_ttest: samples differ in length");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return one_sample_ttest(d, 0.0);
}

StatResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw ContractViolation("pearson: samples differ in length");
  if (x.size() < 3) throw DegenerateError("pearson needs at least 3 pairs");
  if (constant(x) || constant(y))
    throw DegenerateError("pearson: zero variance");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  StatResult r;
  r.n = x.size();
  r.df = static_cast<double>(x.size()) - 2.0;
  r.statistic = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (std::abs(r.statistic) >= 1.0) {
    r.p = 0.0;
  } else {
    const double t = r.statistic *
                     std::sqrt(r.df / (1.0 - r.statistic * r.statistic));
    r.p = student_t_p(t, r.df);
  }
  return r;
}

RankTestResult rank_test(
    const std::vector<std::pair<double, std::vector<double>>>& groups,
    bool lower_is_better) {
  RankTestResult r;
  for (const auto& [target, refs] : groups) {
    for (double x : refs) {
      ++r.n;
      r.as_good += lower_is_better ? x <= target : x >= target;
    }
  }
  if (r.n == 0) throw DegenerateError("rank test without references");
  r.p = static_cast<double>(1 + r.as_good) / static_cast<double>(1 + r.n);
  return r;
}

std::string_view StrengthLabel::name() const {
  if (strength == Strength::kZero || direction == 0) return "ZERO";
  const bool pos = direction > 0;
  switch (strength) {
    case Strength::kStrong:
      return pos ? "STRONG_POSITIVE" : "STRONG_NEGATIVE";
    case Strength::kModerate:
      return pos ? "MODERATE_POSITIVE" : "MODERATE_NEGATIVE";
    case Strength::kWeak:
      return pos ? "WEAK_POSITIVE" : "WEAK_NEGATIVE";
    case Strength::kZero:
      break;
  }
  return "ZERO";
}

StrengthLabel strength_label(double r) {
  if (std::isnan(r) || r < -1.0 || r > 1.0)
    throw ContractViolation("strength_label: r outside [-1, 1]");
  StrengthLabel l;
  if (r == 0.0) return l;
  l.direction = r > 0.0 ? 1 : -1;
  const double a = std::abs(r);
  if (a >= 0.7) {
    l.strength = Strength::kStrong;
  } else if (a >= 0.5) {
    l.strength = Strength::kModerate;
  } else {
    l.strength = Strength::kWeak;
  }
  return l;
}

}  // namespace entrain
