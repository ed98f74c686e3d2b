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

#ifndef CADENZA_SUBMISSION_H_
#define CADENZA_SUBMISSION_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cadenza/audio_buffer.h"
#include "cadenza/scene.h"
#include "cadenza/scene_dataset.h"
#include "cadenza/wav_io.h"

namespace cadenza {

inline constexpr std::string_view kSubmissionManifestName = "submission.json";
inline constexpr std::string_view kDefaultNamingPattern =
    "{scene}_{listener}_remix.wav";

struct SubmissionManifest {
  std::string system_id;
  ChallengeMode mode = ChallengeMode::kIcassp24;
  size_t expected_pairs = 0;
  // Must contain {scene} and {listener} and end in .wav.
  std::string naming_pattern = std::string(kDefaultNamingPattern);
  // Serialized as null when infinite.
  double declared_lookahead_ms = 0.0;
};

absl::Status ValidateManifest(const SubmissionManifest& manifest);
std::string SerializeManifest(const SubmissionManifest& manifest);
absl::StatusOr<SubmissionManifest> ParseManifest(std::string_view json_text);
absl::StatusOr<SubmissionManifest> LoadManifest(
    const std::filesystem::path& submission_dir);
absl::Status SaveManifest(const std::filesystem::path& submission_dir,
                          const SubmissionManifest& manifest);

struct ScenePair {
  std::string scene_id;
  std::string listener_id;
  friend bool operator==(const ScenePair&, const ScenePair&) = default;
};

// Every (scene, listener) pair in scene then listener order.
std::vector<ScenePair> ExpectedPairs(const SceneDataset& dataset);

std::string RemixFileName(std::string_view pattern, const ScenePair& pair);
std::string StemFileName(const ScenePair& pair, Stem stem);

struct FileIssue {
  std::string file;
  std::string message;
};

struct ValidationReport {
  // "<scene>/<listener>" for each pair without a remix file.
  std::vector<std::string> missing;
  // Files that belong to no expected pair.
  std::vector<std::string> extra;
  std::vector<FileIssue> format_errors;
  // Clipped-sample counts for every readable file, keyed by file name.
  std::map<std::string, size_t> clipping;
  bool pass = false;
};

// Checks pair completeness, audio format and naming. Content problems are
// reported, never returned as errors; only an unreadable directory fails.
absl::StatusOr<ValidationReport> ValidateSubmission(
    const std::filesystem::path& submission_dir,
    const SubmissionManifest& manifest, const SceneDataset& dataset);

std::string ValidationReportToJson(const ValidationReport& report);

// Number of samples at or beyond the largest magnitude the format can hold.
size_t CountClippedSamples(const AudioBuffer& audio, SampleFormat format);

}  // namespace cadenza

#endif  // CADENZA_SUBMISSION_H_
