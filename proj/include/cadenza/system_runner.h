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

#ifndef CADENZA_SYSTEM_RUNNER_H_
#define CADENZA_SYSTEM_RUNNER_H_

#include <filesystem>
#include <string>

#include "absl/status/statusor.h"
#include "cadenza/enhancer.h"
#include "cadenza/scene_dataset.h"
#include "cadenza/submission.h"

namespace cadenza {

enum class SystemKind {
  // Separates with the scene's true stems, presented at the listener
  // position like the mixture.
  kOracle,
  // Emits the mixture unchanged.
  kPassthrough,
  // Reads pre-separated stems from <stems_dir>/<scene>/<stem>.wav.
  kExternalStems,
};

struct SystemSpec {
  std::string system_id;
  SystemKind kind = SystemKind::kOracle;
  std::filesystem::path stems_dir;
  // Used for kExternalStems; the others declare their own.
  double declared_lookahead_ms = kNonCausalLookaheadMs;
  EnhancerConfig enhancer;
};

// Parses "oracle", "passthrough" or "stems:<dir>".
absl::StatusOr<SystemSpec> ParseSystem(std::string_view text,
                                       std::string system_id);

// Runs the system over every pair of `dataset` and writes a flat
// submission directory with its manifest.
absl::StatusOr<SubmissionManifest> RunSystem(
    const SceneDataset& dataset, const SystemSpec& system,
    const std::filesystem::path& out_dir, int jobs);

}  // namespace cadenza

#endif  // CADENZA_SYSTEM_RUNNER_H_
