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

#ifndef CADENZA_REPORT_H_
#define CADENZA_REPORT_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cadenza/evaluation.h"
#include "cadenza/stats.h"

namespace cadenza {

struct LeaderboardRow {
  std::string system_id;
  double mean_score = 0.0;
  // Sample standard deviation; 0 for a single record.
  double std_score = 0.0;
  // Scored records.
  size_t n = 0;
  // Records without a remix score.
  size_t failed = 0;
};

// Per-system remix score summary, best first; equal means are ordered by
// system id. Records without a remix score count as failures only.
std::vector<LeaderboardRow> Leaderboard(
    std::span<const EvaluationRecord> records);

struct CorrelationEntry {
  std::optional<SpearmanResult> result;
  // Why no result is available.
  std::string error;
};

struct StatsReport {
  std::vector<LeaderboardRow> leaderboard;
  // Alphabetical; indexes the Dunn matrices.
  std::vector<std::string> systems;
  std::optional<KwResult> kruskal_wallis;
  std::optional<DunnResult> dunn;
  std::string omnibus_error;
  // Remix score against mean-ear severity code, pooled over systems.
  CorrelationEntry severity;
  // Remix score against the scene's gain spread, pooled over systems.
  CorrelationEntry gain_spread;
};

StatsReport BuildStatsReport(std::span<const EvaluationRecord> records);

std::string StatsReportToJson(const StatsReport& report);
std::string StatsReportToMarkdown(const StatsReport& report);

}  // namespace cadenza

#endif  // CADENZA_REPORT_H_
