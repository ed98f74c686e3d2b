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

#ifndef CADENZA_METRICS_H_
#define CADENZA_METRICS_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cadenza/audio_buffer.h"
#include "cadenza/audiology.h"
#include "cadenza/hrir.h"
#include "cadenza/prescription.h"
#include "cadenza/scene.h"

namespace cadenza {

// Intrusive, audiogram-conditioned quality score in [0, 1]. Implementations
// must be safe for concurrent calls.
class MetricBackend {
 public:
  virtual ~MetricBackend() = default;

  virtual absl::StatusOr<double> Score(std::span<const double> processed,
                                       std::span<const double> reference,
                                       const Audiogram& audiogram,
                                       int sample_rate_hz) const = 0;

  virtual std::string_view name() const = 0;
};

struct BuiltinMetricOptions {
  int num_bands = 32;
  double low_edge_hz = 125.0;
  double high_edge_hz = 10000.0;
  double frame_ms = 32.0;
  double hop_ms = 8.0;
  // Digital full scale in dB SPL; a full-scale sine reads this level.
  double full_scale_db_spl = 100.0;
  int min_audible_frames = 8;
};

// Hearing-loss-weighted envelope correlation. Per band, the log envelopes
// of processed and reference are correlated over the frames where the
// reference is above the listener's threshold; the score is the mean
// correlation over bands with enough audible frames.
//
// This is a fast deterministic stand-in with the metric interface, not a
// perceptual model.
class BuiltinMetric : public MetricBackend {
 public:
  explicit BuiltinMetric(BuiltinMetricOptions options = {})
      : options_(options) {}

  absl::StatusOr<double> Score(std::span<const double> processed,
                               std::span<const double> reference,
                               const Audiogram& audiogram,
                               int sample_rate_hz) const override;

  std::string_view name() const override { return "builtin"; }

  // Band levels in dB SPL, indexed [band][frame], plus band centers.
  struct Analysis {
    std::vector<double> centers_hz;
    std::vector<std::vector<double>> levels_db;
    std::vector<bool> band_has_bins;
  };
  Analysis Analyze(std::span<const double> x, int sample_rate_hz) const;

 private:
  BuiltinMetricOptions options_;
};

// Audiogram-conditioned targets for one (scene, listener) pair. `remix` is
// stereo with the left ear in channel 0; each stem is stereo likewise,
// giving the eight per-ear stem references.
struct ReferenceBundle {
  AudioBuffer remix;
  // Empty buffers when built without stem references.
  std::array<AudioBuffer, 4> stems;
};

// The listener-independent half of a reference: the gained remix and,
// optionally, the ungained stems, presented at the ears.
absl::StatusOr<ReferenceBundle> PresentReference(const SceneSpec& scene,
                                                 const StemSet& true_stems,
                                                 std::span<const HrirSet> hrirs,
                                                 bool with_stems = true);

// NAL-R amplifies every present buffer of a presented reference per ear.
absl::StatusOr<ReferenceBundle> AmplifyReference(
    const ReferenceBundle& presented, const Listener& listener,
    int nalr_taps = kDefaultNalrTaps);

// Remix reference: true stems with the scene gains, presented at the ears
// (HRTF rendered in ICASSP24 scenes), NAL-R amplified per ear. Stem
// references: each ungained true stem presented and amplified the same way.
absl::StatusOr<ReferenceBundle> BuildReference(
    const SceneSpec& scene, const StemSet& true_stems, const Listener& listener,
    std::span<const HrirSet> hrirs, int nalr_taps = kDefaultNalrTaps);

// Mean of the left-ear and right-ear scores.
absl::StatusOr<double> ScoreRemix(const AudioBuffer& processed,
                                  const ReferenceBundle& reference,
                                  const Listener& listener,
                                  const MetricBackend& backend);

// Mean over the eight (stem, ear) scores.
absl::StatusOr<double> ScoreVdbo(const std::array<AudioBuffer, 4>& processed,
                                 const ReferenceBundle& reference,
                                 const Listener& listener,
                                 const MetricBackend& backend);

}  // namespace cadenza

#endif  // CADENZA_METRICS_H_
