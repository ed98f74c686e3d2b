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

#ifndef CADENZA_STATS_H_
#define CADENZA_STATS_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace cadenza {

struct RankedSample {
  std::vector<double> values;
  // 1-based ascending ranks; tied values share the mean of their span.
  std::vector<double> ranks;
  // Sizes of tie groups with more than one member.
  std::vector<size_t> tie_groups;
};

// Fails on empty input or any NaN.
absl::StatusOr<RankedSample> RankWithTies(std::span<const double> values);

// Sum over tie groups of t^3 - t.
double TieSum(std::span<const size_t> tie_groups);

// Upper regularized incomplete gamma Q(a, x), series or continued fraction.
double RegularizedGammaQ(double a, double x);

// Regularized incomplete beta I_x(a, b) by continued fraction.
double RegularizedIncompleteBeta(double a, double b, double x);

// Upper tail of the chi-square distribution; 1 for x <= 0.
double ChiSquareSf(double x, int df);

// Upper tail of the standard normal distribution.
double NormalSf(double z);

// Two-sided tail probability of Student's t with `df` degrees of freedom.
double StudentTTwoSidedP(double t, double df);

struct KwResult {
  double h = 0.0;
  int df = 0;
  double p = 1.0;
  // Unset when N = k.
  std::optional<double> eta_squared;
  size_t n = 0;
};

// Effect size (H - k + 1) / (N - k).
double KwEtaSquared(double h, int k, size_t n);

// Tie-corrected Kruskal-Wallis H over two or more non-empty groups.
absl::StatusOr<KwResult> KruskalWallis(
    std::span<const std::vector<double>> groups);

inline double BonferroniAdjust(double p, int comparisons) {
  const double adjusted = p * comparisons;
  return adjusted > 1.0 ? 1.0 : adjusted;
}

struct DunnResult {
  // k x k, symmetric (z antisymmetric), unit diagonal for p values.
  std::vector<std::vector<double>> z;
  std::vector<std::vector<double>> p_raw;
  std::vector<std::vector<double>> p_adjusted;
  int comparisons = 0;
};

// Dunn's post hoc test on pooled tie-averaged ranks with Bonferroni
// adjustment over k(k-1)/2 comparisons.
absl::StatusOr<DunnResult> PairwiseDunn(
    std::span<const std::vector<double>> groups);

struct SpearmanResult {
  double rho = 0.0;
  double p = 1.0;
  double rank_variance_explained = 0.0;
  size_t n = 0;
};

// Pearson correlation of tie-averaged ranks; p from the t approximation
// with n - 2 degrees of freedom. A constant input has no defined rho and
// is reported as an error.
absl::StatusOr<SpearmanResult> Spearman(std::span<const double> x,
                                        std::span<const double> y);

}  // namespace cadenza

#endif  // CADENZA_STATS_H_
