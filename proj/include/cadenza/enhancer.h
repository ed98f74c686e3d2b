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

#ifndef CADENZA_ENHANCER_H_
#define CADENZA_ENHANCER_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cadenza/audio_buffer.h"
#include "cadenza/audiology.h"
#include "cadenza/prescription.h"
#include "cadenza/scene.h"
#include "cadenza/wav_io.h"

namespace cadenza {

inline constexpr double kNonCausalLookaheadMs =
    std::numeric_limits<double>::infinity();

// Demixes a stereo mixture into VDBO stems. Implementations must be safe to
// call from several threads at once, or be instantiated per thread.
class Separator {
 public:
  virtual ~Separator() = default;

  // Stems must match the mixture's rate and length.
  virtual absl::StatusOr<StemSet> Separate(
      const AudioBuffer& mixture) const = 0;

  // How far into the future the separator reads, in ms; infinity when
  // it is not causal.
  virtual double lookahead_ms() const = 0;

  virtual std::string_view name() const = 0;
};

// Returns the given stems whatever the mixture holds.
class OracleSeparator : public Separator {
 public:
  explicit OracleSeparator(StemSet stems) : stems_(std::move(stems)) {}

  absl::StatusOr<StemSet> Separate(const AudioBuffer& mixture) const override;
  double lookahead_ms() const override { return 0.0; }
  std::string_view name() const override { return "oracle"; }

 private:
  StemSet stems_;
};

// Reads stems produced by an outside tool from
// `<dir>/<scene_id>/{vocals,drums,bass,other}.wav`.
class ExternalStemsSeparator : public Separator {
 public:
  ExternalStemsSeparator(std::filesystem::path dir, std::string scene_id,
                         double declared_lookahead_ms = kNonCausalLookaheadMs)
      : dir_(std::move(dir)),
        scene_id_(std::move(scene_id)),
        lookahead_ms_(declared_lookahead_ms) {}

  absl::StatusOr<StemSet> Separate(const AudioBuffer& mixture) const override;
  double lookahead_ms() const override { return lookahead_ms_; }
  std::string_view name() const override { return "external"; }

 private:
  std::filesystem::path dir_;
  std::string scene_id_;
  double lookahead_ms_;
};

double DeclaredLookaheadMs(const Separator& separator);

enum class Amplification { kNone, kNalr };

struct EnhancerConfig {
  // Pass-through systems emit the input untouched (quantization aside) and
  // ignore every other field.
  bool passthrough = false;
  bool apply_gains = true;
  Amplification amplification = Amplification::kNalr;
  double normalize_target = 1.0;
  SampleFormat output_format = SampleFormat::kFloat32;
  int nalr_taps = kDefaultNalrTaps;
  // Also return the amplified, normalized per-stem signals.
  bool emit_stems = false;
};

absl::Status ValidateEnhancerConfig(const EnhancerConfig& config);

struct EnhancerOutput {
  // Quantized to the configured output format, held as doubles.
  AudioBuffer remix;
  size_t clipped_samples = 0;
  double normalize_scale = 1.0;
  // Present when emit_stems is set and the system separates. Each stem is
  // amplified per ear without scene gains and scaled by normalize_scale.
  std::optional<std::array<AudioBuffer, 4>> stems;
};

// separate -> scene gains -> remix -> per-ear NAL-R -> peak normalize ->
// quantize. `separator` may be null for pass-through configs.
absl::StatusOr<EnhancerOutput> RunEnhancer(const EnhancerConfig& config,
                                           const SceneSpec& scene,
                                           const AudioBuffer& input,
                                           const Listener& listener,
                                           const Separator* separator);

// E21-style system: output equals input.
inline AudioBuffer PassthroughSystem(const AudioBuffer& mixture) {
  return mixture;
}

}  // namespace cadenza

#endif  // CADENZA_ENHANCER_H_
