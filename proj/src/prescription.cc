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

#include "cadenza/prescription.h"

#include "absl/strings/str_cat.h"

namespace cadenza {

std::vector<GainPoint> PrescriptionGains::AsTargetCurve() const {
  std::vector<GainPoint> points;
  points.reserve(insertion_gain_db.size());
  for (size_t i = 0; i < insertion_gain_db.size(); ++i) {
    points.push_back({kAudiometricFrequenciesHz[i], insertion_gain_db[i]});
  }
  return points;
}

PrescriptionGains NalrInsertionGains(const Audiogram& audiogram) {
  const auto& h = audiogram.thresholds_db_hl();
  // Indices 1, 2, 3 are 500, 1000 and 2000 Hz.
  const double x = 0.05 * (h[1] + h[2] + h[3]);
  PrescriptionGains gains;
  for (size_t i = 0; i < h.size(); ++i) {
    gains.insertion_gain_db[i] = x + 0.31 * h[i] + kNalrFrequencyConstantsDb[i];
  }
  return gains;
}

absl::StatusOr<FirFilter> DesignPrescriptionFilter(
    const PrescriptionGains& gains, int num_taps, int sample_rate_hz) {
  const std::vector<GainPoint> target = gains.AsTargetCurve();
  return DesignFrequencySampledFir(target, num_taps, sample_rate_hz);
}

absl::StatusOr<FirFilter> DesignNalrFilter(const Audiogram& audiogram,
                                           int num_taps, int sample_rate_hz) {
  return DesignPrescriptionFilter(NalrInsertionGains(audiogram), num_taps,
                                  sample_rate_hz);
}

absl::StatusOr<AudioBuffer> ApplyPrescription(const AudioBuffer& x,
                                              const FirFilter& filter,
                                              bool compensate_delay) {
  return ApplyFir(x, filter, compensate_delay);
}

absl::StatusOr<AudioBuffer> AmplifyForListener(const AudioBuffer& stereo,
                                               const Listener& listener,
                                               int num_taps) {
  if (stereo.num_channels() != 2) {
    return absl::InvalidArgumentError(
        "per-ear amplification needs a stereo signal");
  }
  const int fs = stereo.sample_rate_hz();
  auto left_filter = DesignNalrFilter(listener.left, num_taps, fs);
  if (!left_filter.ok()) return left_filter.status();
  auto right_filter = DesignNalrFilter(listener.right, num_taps, fs);
  if (!right_filter.ok()) return right_filter.status();
  auto left = ApplyPrescription(stereo.ChannelAsMono(0), *left_filter, true);
  if (!left.ok()) return left.status();
  auto right = ApplyPrescription(stereo.ChannelAsMono(1), *right_filter, true);
  if (!right.ok()) return right.status();
  return MakeStereo(*left, *right);
}

}  // namespace cadenza
