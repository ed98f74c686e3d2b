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

#ifndef CADENZA_EVALUATION_H_
#define CADENZA_EVALUATION_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cadenza/metrics.h"
#include "cadenza/prescription.h"
#include "cadenza/scene_dataset.h"
#include "cadenza/submission.h"

namespace cadenza {

// Row status values.
inline constexpr std::string_view kStatusOk = "ok";
inline constexpr std::string_view kStatusMissing = "missing";
inline constexpr std::string_view kStatusUnreadable = "unreadable";
inline constexpr std::string_view kStatusScoreError = "score_error";
// The remix was scored but the submitted stems could not be.
inline constexpr std::string_view kStatusStemsError = "stems_error";

struct EvaluationRecord {
  std::string system_id;
  std::string scene_id;
  std::string listener_id;
  std::optional<double> remix_score;
  std::optional<double> vdbo_score;
  // Mean-ear severity grade code.
  int severity_code = 0;
  double gain_spread_db = 0.0;
  std::string status;

  friend bool operator==(const EvaluationRecord&,
                         const EvaluationRecord&) = default;
};

inline constexpr std::string_view kRecordsCsvHeader =
    "system_id,scene_id,listener_id,remix_score,vdbo_score,severity_code,"
    "gain_spread_db,status";

// Doubles are written with 17 significant digits so a parse round trip is
// exact; absent scores are empty fields.
std::string RecordsToCsv(std::span<const EvaluationRecord> records);
absl::StatusOr<std::vector<EvaluationRecord>> ParseRecordsCsv(
    std::string_view text);
absl::StatusOr<std::vector<EvaluationRecord>> LoadRecordsCsv(
    const std::filesystem::path& path);

struct EvaluateOptions {
  int jobs = 1;
  // Score a submission that failed validation. Pair completeness is still
  // checked and missing pairs are recorded as such.
  bool force = false;
  int nalr_taps = kDefaultNalrTaps;
  // Score submitted stems when all four are present for a pair.
  bool score_stems = true;
};

struct EvaluationRun {
  std::string system_id;
  ValidationReport validation;
  // One row per expected pair, in scene then listener order.
  std::vector<EvaluationRecord> records;
  size_t failures = 0;
  double wall_time_s = 0.0;
};

// Scores every expected pair of `dataset` found in `submission_dir`.
// Refuses a submission that fails validation unless forced, and fails
// before scoring when any scene's reference stems cannot be found.
// Per-pair problems are recorded in the row status.
absl::StatusOr<EvaluationRun> EvaluateSubmission(
    const std::filesystem::path& submission_dir, const SceneDataset& dataset,
    const MetricBackend& backend, const EvaluateOptions& options = {});

}  // namespace cadenza

#endif  // CADENZA_EVALUATION_H_
