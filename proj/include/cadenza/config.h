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

#ifndef CADENZA_CONFIG_H_
#define CADENZA_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "cadenza/causality.h"
#include "cadenza/enhancer.h"
#include "cadenza/external_metric.h"
#include "cadenza/scene_dataset.h"

namespace cadenza {

enum class MetricKind { kBuiltin, kExternal };

// Settings read from a TOML file. Top-level keys: seed, jobs, data_root.
// Tables: [scenes], [enhancer], [metric], [probe]. Unknown keys are errors
// so that typos do not silently fall back to defaults.
struct HarnessConfig {
  std::optional<uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> data_root;
  SceneDatasetOptions scenes;
  EnhancerConfig enhancer;
  MetricKind metric = MetricKind::kBuiltin;
  ExternalMetricOptions external_metric;
  CausalityProbeOptions probe;
};

absl::StatusOr<HarnessConfig> ParseConfig(std::string_view toml_text);
absl::StatusOr<HarnessConfig> LoadConfig(const std::filesystem::path& path);

}  // namespace cadenza

#endif  // CADENZA_CONFIG_H_
