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

#ifndef CADENZA_MIXING_H_
#define CADENZA_MIXING_H_

#include <cstddef>

#include "absl/status/statusor.h"
#include "cadenza/audio_buffer.h"
#include "cadenza/wav_io.h"

namespace cadenza {

// Sum of the stems, each scaled by 10^(gain/20). No normalization.
AudioBuffer RemixWithGains(const StemSet& stems, const GainSet& gains);

// Same, over any four equally shaped buffers in VDBO order.
absl::StatusOr<AudioBuffer> RemixBuffers(
    const std::array<AudioBuffer, 4>& stems, const GainSet& gains);

struct NormalizedAudio {
  AudioBuffer audio;
  double scale = 1.0;
};

// Scales so the largest magnitude across channels equals `target`. Silent
// input is returned unchanged with scale 1.
absl::StatusOr<NormalizedAudio> PeakNormalize(const AudioBuffer& x,
                                              double target);

struct QuantizedAudio {
  AudioBuffer audio;
  size_t clipped_samples = 0;
};

// Rounds every sample to `format` (see QuantizeSample).
QuantizedAudio Quantize(const AudioBuffer& x, SampleFormat format);

}  // namespace cadenza

#endif  // CADENZA_MIXING_H_
