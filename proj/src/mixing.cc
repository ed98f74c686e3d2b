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

#include "cadenza/mixing.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace cadenza {

AudioBuffer RemixWithGains(const StemSet& stems, const GainSet& gains) {
  // StemSet guarantees matching shapes.
  return *RemixBuffers(stems.stems(), gains);
}

absl::StatusOr<AudioBuffer> RemixBuffers(
    const std::array<AudioBuffer, 4>& stems, const GainSet& gains) {
  const AudioBuffer& first = stems[0];
  AudioBuffer out = AudioBuffer::Zeros(
      first.sample_rate_hz(), first.num_channels(), first.num_frames());
  for (Stem s : kAllStems) {
    const AudioBuffer& stem = stems[static_cast<size_t>(s)];
    if (stem.num_channels() != first.num_channels() ||
        stem.num_frames() != first.num_frames() ||
        stem.sample_rate_hz() != first.sample_rate_hz()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "stem ", std::string(StemName(s)), " does not match vocals' shape"));
    }
    const double g = DbToAmplitude(gains.gain_db(s));
    for (int c = 0; c < out.num_channels(); ++c) {
      auto dst = out.mutable_channel(c);
      auto src = stem.channel(c);
      for (size_t i = 0; i < dst.size(); ++i) dst[i] += g * src[i];
    }
  }
  return out;
}

absl::StatusOr<NormalizedAudio> PeakNormalize(const AudioBuffer& x,
                                              double target) {
  if (!(target > 0.0 && target <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("normalization target ", target, " is outside (0, 1]"));
  }
  NormalizedAudio out{x, 1.0};
  const double peak = x.MaxAbs();
  if (peak == 0.0) return out;
  out.scale = target / peak;
  out.audio.Scale(out.scale);
  return out;
}

QuantizedAudio Quantize(const AudioBuffer& x, SampleFormat format) {
  QuantizedAudio out{x, 0};
  for (int c = 0; c < out.audio.num_channels(); ++c) {
    for (double& v : out.audio.mutable_channel(c)) {
      bool clip = false;
      v = QuantizeSample(v, format, &clip);
      out.clipped_samples += clip ? 1 : 0;
    }
  }
  return out;
}

}  // namespace cadenza
