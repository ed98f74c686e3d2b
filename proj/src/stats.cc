// Copyright 2026 The Cadenza Eval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cadenza/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace cadenza {
namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 100000;

// Lower regularized gamma P(a, x) by its power series; valid for x < a + 1.
double GammaPSeries(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a, x) by modified Lentz continued fraction;
// valid for x >= a + 1.
double GammaQContinuedFraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double BetaContinuedFraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

absl::Status CheckGroups(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) {
    return absl::InvalidArgumentError("at least two groups are required");
  }
  for (size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) {
      return absl::InvalidArgumentError(absl::StrCat("group ", g, " is empty"));
    }
  }
  return absl::OkStatus();
}

struct PooledRanks {
  std::vector<double> rank_sums;
  std::vector<size_t> sizes;
  size_t n = 0;
  double tie_sum = 0.0;
};

absl::StatusOr<PooledRanks> Pool(std::span<const std::vector<double>> groups) {
  PooledRanks pooled;
  std::vector<double> all;
  for (const auto& g : groups) {
    all.insert(all.end(), g.begin(), g.end());
    pooled.sizes.push_back(g.size());
  }
  auto ranked = RankWithTies(all);
  if (!ranked.ok()) return ranked.status();
  pooled.n = all.size();
  pooled.tie_sum = TieSum(ranked->tie_groups);
  size_t offset = 0;
  for (size_t size : pooled.sizes) {
    double sum = 0.0;
    for (size_t i = 0; i < size; ++i) sum += ranked->ranks[offset + i];
    pooled.rank_sums.push_back(sum);
    offset += size;
  }
  return pooled;
}

}  // namespace

absl::StatusOr<RankedSample> RankWithTies(std::span<const double> values) {
  if (values.empty()) return absl::InvalidArgumentError("nothing to rank");
  for (size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("NaN at position ", i, " cannot be ranked"));
    }
  }
  RankedSample out;
  out.values.assign(values.begin(), values.end());
  out.ranks.resize(values.size());
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t k = i; k < j; ++k) out.ranks[order[k]] = rank;
    if (j - i > 1) out.tie_groups.push_back(j - i);
    i = j;
  }
  return out;
}

double TieSum(std::span<const size_t> tie_groups) {
  double sum = 0.0;
  for (size_t t : tie_groups) {
    const double td = static_cast<double>(t);
    sum += td * td * td - td;
  }
  return sum;
}

double RegularizedGammaQ(double a, double x) {
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - GammaPSeries(a, x);
  return GammaQContinuedFraction(a, x);
}

double RegularizedIncompleteBeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front =
      std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
               a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * BetaContinuedFraction(a, b, x) / a;
  }
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

double ChiSquareSf(double x, int df) {
  if (x <= 0.0) return 1.0;
  return RegularizedGammaQ(0.5 * df, 0.5 * x);
}

double NormalSf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double StudentTTwoSidedP(double t, double df) {
  if (std::isinf(t)) return 0.0;
  return RegularizedIncompleteBeta(0.5 * df, 0.5, df / (df + t * t));
}

double KwEtaSquared(double h, int k, size_t n) {
  return (h - k + 1.0) / (static_cast<double>(n) - k);
}

absl::StatusOr<KwResult> KruskalWallis(
    std::span<const std::vector<double>> groups) {
  absl::Status valid = CheckGroups(groups);
  if (!valid.ok()) return valid;
  auto pooled = Pool(groups);
  if (!pooled.ok()) return pooled.status();
  const double n = static_cast<double>(pooled->n);
  const int k = static_cast<int>(groups.size());
  KwResult r;
  r.n = pooled->n;
  r.df = k - 1;
  const double correction = 1.0 - pooled->tie_sum / (n * n * n - n);
  if (correction <= 0.0) {
    // Every value identical: no evidence of any difference.
    r.h = 0.0;
  } else {
    double s = 0.0;
    for (size_t g = 0; g < groups.size(); ++g) {
      s += pooled->rank_sums[g] * pooled->rank_sums[g] /
           static_cast<double>(pooled->sizes[g]);
    }
    r.h = std::max(0.0,
                   (12.0 / (n * (n + 1.0)) * s - 3.0 * (n + 1.0)) / correction);
  }
  r.p = ChiSquareSf(r.h, r.df);
  if (pooled->n > static_cast<size_t>(k)) {
    r.eta_squared = KwEtaSquared(r.h, k, pooled->n);
  }
  return r;
}

absl::StatusOr<DunnResult> PairwiseDunn(
    std::span<const std::vector<double>> groups) {
  absl::Status valid = CheckGroups(groups);
  if (!valid.ok()) return valid;
  auto pooled = Pool(groups);
  if (!pooled.ok()) return pooled.status();
  const size_t k = groups.size();
  const double n = static_cast<double>(pooled->n);
  const double variance =
      n * (n + 1.0) / 12.0 - pooled->tie_sum / (12.0 * (n - 1.0));
  DunnResult r;
  r.comparisons = static_cast<int>(k * (k - 1) / 2);
  r.z.assign(k, std::vector<double>(k, 0.0));
  r.p_raw.assign(k, std::vector<double>(k, 1.0));
  r.p_adjusted.assign(k, std::vector<double>(k, 1.0));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i + 1; j < k; ++j) {
      const double mi = pooled->rank_sums[i] / pooled->sizes[i];
      const double mj = pooled->rank_sums[j] / pooled->sizes[j];
      const double se = std::sqrt(
          variance * (1.0 / pooled->sizes[i] + 1.0 / pooled->sizes[j]));
      const double z = se > 0.0 ? (mi - mj) / se : 0.0;
      const double p = se > 0.0 ? 2.0 * NormalSf(std::abs(z)) : 1.0;
      r.z[i][j] = z;
      r.z[j][i] = -z;
      r.p_raw[i][j] = r.p_raw[j][i] = std::min(1.0, p);
      r.p_adjusted[i][j] = r.p_adjusted[j][i] =
          BonferroniAdjust(p, r.comparisons);
    }
  }
  return r;
}

absl::StatusOr<SpearmanResult> Spearman(std::span<const double> x,
                                        std::span<const double> y) {
  if (x.size() != y.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "spearman inputs differ in length: ", x.size(), " vs ", y.size()));
  }
  if (x.size() < 3) {
    return absl::InvalidArgumentError("spearman needs at least 3 pairs");
  }
  auto rx = RankWithTies(x);
  if (!rx.ok()) return rx.status();
  auto ry = RankWithTies(y);
  if (!ry.ok()) return ry.status();
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = rx->ranks[i] - mean;
    const double dy = ry->ranks[i] - mean;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    return absl::InvalidArgumentError(
        "spearman rho is undefined for a constant input");
  }
  SpearmanResult r;
  r.n = x.size();
  r.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  r.rank_variance_explained = r.rho * r.rho;
  const double df = n - 2.0;
  if (std::abs(r.rho) >= 1.0) {
    r.p = 0.0;
  } else {
    const double t = r.rho * std::sqrt(df / (1.0 - r.rho * r.rho));
    r.p = StudentTTwoSidedP(t, df);
  }
  return r;
}

}  // namespace cadenza
