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

#ifndef CADENZA_EXTERNAL_METRIC_H_
#define CADENZA_EXTERNAL_METRIC_H_

#include <filesystem>
#include <memory>
#include <semaphore>
#include <string>
#include <vector>

#include "cadenza/metrics.h"

namespace cadenza {

struct ExternalMetricOptions {
  // Command and arguments. Each element may contain the placeholders
  // {processed}, {reference}, {listener_json} and {fs}.
  std::vector<std::string> argv;
  double timeout_s = 300.0;
  int max_parallel = 4;
  // Parent of the per-call temporary workspaces.
  std::filesystem::path workspace_root = std::filesystem::temp_directory_path();
};

// Scores by running an outside evaluator. Each call writes processed and
// reference mono WAVs plus a one-listener JSON (the audiogram on both ears,
// id "listener") to a fresh workspace, runs the command, and reads
// {"score": <real>} from its standard output. Failures carry the command,
// exit status and captured output.
class ExternalMetric : public MetricBackend {
 public:
  explicit ExternalMetric(ExternalMetricOptions options);

  absl::StatusOr<double> Score(std::span<const double> processed,
                               std::span<const double> reference,
                               const Audiogram& audiogram,
                               int sample_rate_hz) const override;

  std::string_view name() const override { return "external"; }

 private:
  ExternalMetricOptions options_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
};

}  // namespace cadenza

#endif  // CADENZA_EXTERNAL_METRIC_H_
