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

#ifndef CADENZA_CAUSALITY_H_
#define CADENZA_CAUSALITY_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "absl/status/statusor.h"
#include "cadenza/audio_buffer.h"

namespace cadenza {

// An audio transform under audit. It must return at least as many frames
// as it is given, with the same channel count.
using AudioProcessor =
    std::function<absl::StatusOr<AudioBuffer>(const AudioBuffer&)>;

inline constexpr double kCausalityBoundMs = 5.0;

struct CausalityProbeOptions {
  double bound_ms = kCausalityBoundMs;
  int num_probes = 16;
  double signal_s = 5.0;
  double tolerance = 1e-7;
  // Future dependence beyond this is reported as unbounded.
  double max_lookahead_ms = 50.0;
  uint64_t seed = 0;
};

struct CausalityReport {
  double bound_ms = 0.0;
  // Future samples allowed to differ by the bound.
  size_t bound_frames = 0;
  // Largest future dependence over all probes; infinity when some probe
  // still depends on input beyond max_lookahead_ms.
  double measured_dependence_ms = 0.0;
  std::vector<double> per_probe_ms;
  // The output did not change when the whole input was replaced; such a
  // processor reads something other than its input and cannot be audited.
  bool input_independent = false;
  // Outputs up to every probe time are identical whenever inputs agree up
  // to that time plus the bound, and the output depends on the input.
  bool pass = false;
};

// Paired-input audit on stereo noise: for each probe time t, a second
// input agrees with the first up to t + delta and carries louder,
// independent noise afterwards; the smallest delta at which outputs up to
// t agree is the future dependence at t.
absl::StatusOr<CausalityReport> ProbeCausality(
    const AudioProcessor& processor, int sample_rate_hz,
    const CausalityProbeOptions& options = {});

// Reference processors with known lookahead.

// Plain causal convolution with `taps`, truncated to the input length.
AudioProcessor CausalFirProcessor(std::vector<double> taps);

// Stereo-linked limiter with gain min(1, threshold / peak) where the peak
// is taken over the current and next `lookahead_ms` of input.
AudioProcessor LookaheadLimiter(double lookahead_ms, double threshold = 0.25);

// Scales the whole signal so its peak equals `target`.
AudioProcessor GlobalPeakNormalizer(double target = 1.0);

}  // namespace cadenza

#endif  // CADENZA_CAUSALITY_H_
