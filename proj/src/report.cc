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

#include "cadenza/report.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"

namespace cadenza {
namespace {

using Json = nlohmann::ordered_json;

std::map<std::string, std::vector<double>> ScoresBySystem(
    std::span<const EvaluationRecord> records) {
  std::map<std::string, std::vector<double>> by_system;
  for (const EvaluationRecord& r : records) {
    auto& scores = by_system[r.system_id];
    if (r.remix_score.has_value()) scores.push_back(*r.remix_score);
  }
  return by_system;
}

CorrelationEntry Correlate(std::span<const EvaluationRecord> records,
                           double (*covariate)(const EvaluationRecord&)) {
  std::vector<double> scores;
  std::vector<double> values;
  for (const EvaluationRecord& r : records) {
    if (!r.remix_score.has_value()) continue;
    scores.push_back(*r.remix_score);
    values.push_back(covariate(r));
  }
  CorrelationEntry entry;
  auto rho = Spearman(scores, values);
  if (rho.ok()) {
    entry.result = *rho;
  } else {
    entry.error = std::string(rho.status().message());
  }
  return entry;
}

Json MatrixJson(const std::vector<std::vector<double>>& m) {
  Json rows = Json::array();
  for (const auto& row : m) rows.push_back(row);
  return rows;
}

Json CorrelationJson(const CorrelationEntry& c) {
  if (!c.result.has_value()) return Json{{"error", c.error}};
  return Json{{"rho", c.result->rho},
              {"p", c.result->p},
              {"rank_variance_explained", c.result->rank_variance_explained},
              {"n", c.result->n}};
}

std::string FormatP(double p) {
  return p < 0.001 ? std::string("<0.001") : absl::StrFormat("%.3f", p);
}

std::string CorrelationLine(const char* label, const CorrelationEntry& c) {
  if (!c.result.has_value()) {
    return absl::StrCat("- ", label, ": not defined (", c.error, ")\n");
  }
  return absl::StrFormat(
      "- %s: rho = %.3f, p = %s, N = %d; explains %.0f%% of the rank "
      "variance\n",
      label, c.result->rho, FormatP(c.result->p), c.result->n,
      100.0 * c.result->rank_variance_explained);
}

}  // namespace

std::vector<LeaderboardRow> Leaderboard(
    std::span<const EvaluationRecord> records) {
  std::map<std::string, LeaderboardRow> rows;
  std::map<std::string, std::vector<double>> scores;
  for (const EvaluationRecord& r : records) {
    LeaderboardRow& row = rows[r.system_id];
    row.system_id = r.system_id;
    if (r.remix_score.has_value()) {
      scores[r.system_id].push_back(*r.remix_score);
    } else {
      ++row.failed;
    }
  }
  std::vector<LeaderboardRow> out;
  for (auto& [id, row] : rows) {
    const std::vector<double>& s = scores[id];
    row.n = s.size();
    if (!s.empty()) {
      double sum = 0.0;
      for (double v : s) sum += v;
      row.mean_score = sum / s.size();
      if (s.size() > 1) {
        double ss = 0.0;
        for (double v : s) ss += (v - row.mean_score) * (v - row.mean_score);
        row.std_score = std::sqrt(ss / (s.size() - 1));
      }
    }
    out.push_back(row);
  }
  // The map already orders by id, so a stable sort keeps ties alphabetical.
  std::stable_sort(out.begin(), out.end(),
                   [](const LeaderboardRow& a, const LeaderboardRow& b) {
                     return a.mean_score > b.mean_score;
                   });
  return out;
}

StatsReport BuildStatsReport(std::span<const EvaluationRecord> records) {
  StatsReport report;
  report.leaderboard = Leaderboard(records);
  std::vector<std::vector<double>> groups;
  for (auto& [id, scores] : ScoresBySystem(records)) {
    report.systems.push_back(id);
    groups.push_back(std::move(scores));
  }
  auto kw = KruskalWallis(groups);
  auto dunn = PairwiseDunn(groups);
  if (kw.ok() && dunn.ok()) {
    report.kruskal_wallis = *kw;
    report.dunn = *std::move(dunn);
  } else {
    report.omnibus_error =
        std::string(kw.ok() ? dunn.status().message() : kw.status().message());
  }
  report.severity = Correlate(records, [](const EvaluationRecord& r) {
    return static_cast<double>(r.severity_code);
  });
  report.gain_spread = Correlate(
      records, [](const EvaluationRecord& r) { return r.gain_spread_db; });
  return report;
}

std::string StatsReportToJson(const StatsReport& report) {
  Json j;
  Json board = Json::array();
  for (const LeaderboardRow& row : report.leaderboard) {
    board.push_back({{"system_id", row.system_id},
                     {"mean_score", row.mean_score},
                     {"std_score", row.std_score},
                     {"n", row.n},
                     {"failed", row.failed}});
  }
  j["leaderboard"] = board;
  j["systems"] = report.systems;
  if (report.kruskal_wallis.has_value()) {
    const KwResult& kw = *report.kruskal_wallis;
    j["kruskal_wallis"] = {
        {"h", kw.h}, {"df", kw.df}, {"p", kw.p}, {"n", kw.n}};
    if (kw.eta_squared.has_value()) {
      j["kruskal_wallis"]["eta_squared"] = *kw.eta_squared;
    } else {
      j["kruskal_wallis"]["eta_squared"] = nullptr;
    }
    j["dunn"] = {{"comparisons", report.dunn->comparisons},
                 {"z", MatrixJson(report.dunn->z)},
                 {"p_adjusted", MatrixJson(report.dunn->p_adjusted)}};
  } else {
    j["kruskal_wallis"] = {{"error", report.omnibus_error}};
  }
  j["spearman_severity"] = CorrelationJson(report.severity);
  j["spearman_gain_spread"] = CorrelationJson(report.gain_spread);
  return j.dump(2) + "\n";
}

std::string StatsReportToMarkdown(const StatsReport& report) {
  std::string md = "# Evaluation summary\n\n";
  absl::StrAppend(&md, "| System | Score | N | Failed |\n",
                  "|---|---|---|---|\n");
  for (const LeaderboardRow& row : report.leaderboard) {
    absl::StrAppend(
        &md, absl::StrFormat("| %s | %.3f ± %.3f | %d | %d |\n", row.system_id,
                             row.mean_score, row.std_score, row.n, row.failed));
  }
  absl::StrAppend(&md, "\n## Differences between systems\n\n");
  if (report.kruskal_wallis.has_value()) {
    const KwResult& kw = *report.kruskal_wallis;
    std::string eta = kw.eta_squared.has_value()
                          ? absl::StrFormat("%.2f", *kw.eta_squared)
                          : std::string("n/a");
    absl::StrAppend(
        &md, absl::StrFormat("Kruskal-Wallis: N = %d, df = %d, H = %.3f, "
                             "p = %s, eta^2 = %s\n\n",
                             kw.n, kw.df, kw.h, FormatP(kw.p), eta));
    absl::StrAppend(&md, "Pairwise Dunn tests, Bonferroni-adjusted p (m = ",
                    report.dunn->comparisons, "):\n\n|  |");
    for (const std::string& s : report.systems)
      absl::StrAppend(&md, " ", s, " |");
    absl::StrAppend(&md, "\n|---|");
    for (size_t i = 0; i < report.systems.size(); ++i)
      absl::StrAppend(&md, "---|");
    absl::StrAppend(&md, "\n");
    for (size_t i = 0; i < report.systems.size(); ++i) {
      absl::StrAppend(&md, "| ", report.systems[i], " |");
      for (size_t k = 0; k < report.systems.size(); ++k) {
        absl::StrAppend(
            &md, " ",
            i == k ? std::string("-") : FormatP(report.dunn->p_adjusted[i][k]),
            " |");
      }
      absl::StrAppend(&md, "\n");
    }
  } else {
    absl::StrAppend(&md, "Not tested: ", report.omnibus_error, "\n");
  }
  absl::StrAppend(
      &md, "\n## Correlations (Spearman)\n\n",
      CorrelationLine("score vs hearing loss severity", report.severity),
      CorrelationLine("score vs gain spread", report.gain_spread));
  return md;
}

}  // namespace cadenza
