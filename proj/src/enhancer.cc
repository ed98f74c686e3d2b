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

#include "cadenza/enhancer.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "cadenza/mixing.h"

namespace cadenza {

absl::StatusOr<StemSet> OracleSeparator::Separate(
    const AudioBuffer& mixture) const {
  if (mixture.sample_rate_hz() != stems_.sample_rate_hz() ||
      mixture.num_frames() != stems_.num_frames()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "oracle stems (", stems_.num_frames(), " frames at ",
        stems_.sample_rate_hz(), " Hz) do not match the mixture (",
        mixture.num_frames(), " frames at ", mixture.sample_rate_hz(), " Hz)"));
  }
  return stems_;
}

absl::StatusOr<StemSet> ExternalStemsSeparator::Separate(
    const AudioBuffer& mixture) const {
  std::array<AudioBuffer, 4> stems;
  for (Stem s : kAllStems) {
    auto a = ReadWavExpecting(
        dir_ / scene_id_ / absl::StrCat(std::string(StemName(s)), ".wav"),
        mixture.sample_rate_hz(), 2);
    if (!a.ok()) return a.status();
    if (a->num_frames() != mixture.num_frames()) {
      return absl::InvalidArgumentError(
          absl::StrCat("external ", std::string(StemName(s)),
                       " stem for scene ", scene_id_, " has ", a->num_frames(),
                       " frames, mixture has ", mixture.num_frames()));
    }
    stems[static_cast<size_t>(s)] = std::move(*a);
  }
  return StemSet::Create(std::move(stems));
}

double DeclaredLookaheadMs(const Separator& separator) {
  return separator.lookahead_ms();
}

absl::Status ValidateEnhancerConfig(const EnhancerConfig& config) {
  if (!(config.normalize_target > 0.0 && config.normalize_target <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "normalize_target must lie in (0, 1], got ", config.normalize_target));
  }
  if (config.nalr_taps < 1 || config.nalr_taps % 2 == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("nalr_taps must be odd, got ", config.nalr_taps));
  }
  return absl::OkStatus();
}

absl::StatusOr<EnhancerOutput> RunEnhancer(const EnhancerConfig& config,
                                           const SceneSpec& scene,
                                           const AudioBuffer& input,
                                           const Listener& listener,
                                           const Separator* separator) {
  absl::Status valid = ValidateEnhancerConfig(config);
  if (!valid.ok()) return valid;
  if (input.num_channels() != 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("scene ", scene.scene_id, ": input is not stereo"));
  }
  EnhancerOutput out;
  if (config.passthrough) {
    QuantizedAudio q = Quantize(PassthroughSystem(input), config.output_format);
    out.remix = std::move(q.audio);
    out.clipped_samples = q.clipped_samples;
    return out;
  }
  if (separator == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("scene ", scene.scene_id, ": no separator configured"));
  }
  auto stems = separator->Separate(input);
  if (!stems.ok()) {
    return absl::Status(stems.status().code(),
                        absl::StrCat("scene ", scene.scene_id, ": separator ",
                                     std::string(separator->name()), ": ",
                                     stems.status().message()));
  }
  if (stems->sample_rate_hz() != input.sample_rate_hz() ||
      stems->num_frames() != input.num_frames()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "scene ", scene.scene_id, ": separator output does not match input"));
  }
  const GainSet gains = config.apply_gains ? scene.gains : GainSet{};
  AudioBuffer remix = RemixWithGains(*stems, gains);

  auto amplify = [&](const AudioBuffer& x) -> absl::StatusOr<AudioBuffer> {
    if (config.amplification == Amplification::kNone) return x;
    return AmplifyForListener(x, listener, config.nalr_taps);
  };
  auto amplified = amplify(remix);
  if (!amplified.ok()) return amplified.status();
  auto normalized = PeakNormalize(*amplified, config.normalize_target);
  if (!normalized.ok()) return normalized.status();
  QuantizedAudio q = Quantize(normalized->audio, config.output_format);
  out.remix = std::move(q.audio);
  out.clipped_samples = q.clipped_samples;
  out.normalize_scale = normalized->scale;

  if (config.emit_stems) {
    std::array<AudioBuffer, 4> processed;
    for (Stem s : kAllStems) {
      auto a = amplify(stems->stem(s));
      if (!a.ok()) return a.status();
      a->Scale(normalized->scale);
      QuantizedAudio qs = Quantize(*a, config.output_format);
      out.clipped_samples += qs.clipped_samples;
      processed[static_cast<size_t>(s)] = std::move(qs.audio);
    }
    out.stems = std::move(processed);
  }
  return out;
}

}  // namespace cadenza
