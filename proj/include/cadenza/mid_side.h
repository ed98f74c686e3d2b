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

#ifndef CADENZA_MID_SIDE_H_
#define CADENZA_MID_SIDE_H_

#include <utility>

#include "absl/status/statusor.h"
#include "cadenza/audio_buffer.h"
#include "cadenza/fir.h"

namespace cadenza {

struct MidSide {
  AudioBuffer mid;   // (L + R) / 2
  AudioBuffer side;  // (L - R) / 2
};

absl::StatusOr<MidSide> MidSideSplit(const AudioBuffer& stereo);

// L' = G(M) + H(S), R' = G(M) - H(S), both filters delay compensated.
absl::StatusOr<AudioBuffer> MidSideEq(const AudioBuffer& stereo,
                                      const FirFilter& mid_filter,
                                      const FirFilter& side_filter);

inline constexpr int kDefaultMidSideTaps = 511;

struct MidSideFilters {
  FirFilter mid;   // -2 dB below 2 kHz, 0 dB above
  FirFilter side;  // +3 dB between 2 and 6 kHz, 0 dB elsewhere
};

// The E17 rebalancing equalizer. Band edges have 1/3-octave transitions
// centered on the nominal edge frequency.
absl::StatusOr<MidSideFilters> DefaultE17Filters(
    int sample_rate_hz, int num_taps = kDefaultMidSideTaps);

}  // namespace cadenza

#endif  // CADENZA_MID_SIDE_H_
