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

#ifndef CADENZA_PRESCRIPTION_H_
#define CADENZA_PRESCRIPTION_H_

#include <array>
#include <vector>

#include "absl/status/statusor.h"
#include "cadenza/audio_buffer.h"
#include "cadenza/audiology.h"
#include "cadenza/fir.h"

namespace cadenza {

// NAL-R frequency constants k(f) in dB at kAudiometricFrequenciesHz, from
// Byrne & Dillon (1986), "The National Acoustic Laboratories' (NAL) new
// procedure for selecting the gain and frequency response of a hearing aid".
// The published table stops at 6 kHz; 8 kHz repeats the high-frequency
// plateau.
inline constexpr std::array<double, kNumAudiometricFrequencies>
    kNalrFrequencyConstantsDb = {-17.0, -8.0, 1.0,  -1.0,
                                 -2.0,  -2.0, -2.0, -2.0};

inline constexpr int kDefaultNalrTaps = 221;

struct PrescriptionGains {
  // Insertion gain per audiometric frequency; may be negative.
  std::array<double, kNumAudiometricFrequencies> insertion_gain_db{};

  std::vector<GainPoint> AsTargetCurve() const;
};

// IG(f) = 0.05 (H500 + H1000 + H2000) + 0.31 H(f) + k(f). Not clamped.
PrescriptionGains NalrInsertionGains(const Audiogram& audiogram);

absl::StatusOr<FirFilter> DesignPrescriptionFilter(
    const PrescriptionGains& gains, int num_taps, int sample_rate_hz);

// Shorthand for NalrInsertionGains followed by DesignPrescriptionFilter.
absl::StatusOr<FirFilter> DesignNalrFilter(const Audiogram& audiogram,
                                           int num_taps, int sample_rate_hz);

absl::StatusOr<AudioBuffer> ApplyPrescription(const AudioBuffer& x,
                                              const FirFilter& filter,
                                              bool compensate_delay);

// Filters the left channel of `stereo` with the left ear's prescription and
// the right channel with the right ear's, delay compensated.
absl::StatusOr<AudioBuffer> AmplifyForListener(const AudioBuffer& stereo,
                                               const Listener& listener,
                                               int num_taps = kDefaultNalrTaps);

}  // namespace cadenza

#endif  // CADENZA_PRESCRIPTION_H_
