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

#ifndef CADENZA_FIR_H_
#define CADENZA_FIR_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "cadenza/audio_buffer.h"

namespace cadenza {

// Linear-phase FIR filter: odd length, taps symmetric about the center, so
// the group delay is exactly (size - 1) / 2 samples.
class FirFilter {
 public:
  static absl::StatusOr<FirFilter> Create(std::vector<double> taps,
                                          int sample_rate_hz);

  // Single unit tap.
  static FirFilter Identity(int sample_rate_hz);

  const std::vector<double>& taps() const { return taps_; }
  int sample_rate_hz() const { return sample_rate_hz_; }
  size_t group_delay_samples() const { return (taps_.size() - 1) / 2; }

  // |H(f)| in dB, evaluated directly from the taps.
  double MagnitudeDb(double frequency_hz) const;

  // JSON array of taps, for debugging.
  std::string ToJson() const;

 private:
  FirFilter(std::vector<double> taps, int sample_rate_hz)
      : taps_(std::move(taps)), sample_rate_hz_(sample_rate_hz) {}

  std::vector<double> taps_;
  int sample_rate_hz_;
};

// Tolerance on tap symmetry accepted by FirFilter::Create.
inline constexpr double kFirSymmetryTolerance = 1e-12;

struct GainPoint {
  double frequency_hz;
  double gain_db;
};

// Piecewise-linear interpolation of `points` (ascending frequency) on
// log-frequency / dB axes, held at the end values outside their range.
double InterpolateGainDb(std::span<const GainPoint> points,
                         double frequency_hz);

struct FirDesignOptions {
  // Kaiser window shape applied to the sampled impulse response.
  double kaiser_beta = 2.5;
  // Passes of correcting the target at the control points by the measured
  // error of the previous design.
  int refinement_passes = 12;
  // Refinement stops once every control point is this close.
  double refinement_tolerance_db = 1e-3;
};

inline constexpr int kMinFirDesignTaps = 63;
inline constexpr int kMinFirDesignSampleRate = 16000;

// Frequency-sampling design of a linear-phase FIR approximating the
// magnitude curve through `points`. The dense target is sampled on a fine
// grid, inverted with a real inverse transform to a zero-phase response,
// centered, truncated to `num_taps` and Kaiser windowed. Control points below
// Nyquist are then matched by iterative correction of the target.
//
// Requires odd num_taps >= 63 and sample_rate_hz >= 16000. Whether the
// control points are met depends on the filter being long enough to resolve
// the target's detail; check with MaxControlPointErrorDb.
absl::StatusOr<FirFilter> DesignFrequencySampledFir(
    std::span<const GainPoint> points, int num_taps, int sample_rate_hz,
    const FirDesignOptions& options = {});

// Largest |designed - target| over control points below Nyquist.
double MaxControlPointErrorDb(const FirFilter& filter,
                              std::span<const GainPoint> points);

// Filters every channel. With `compensate_delay`, the output is advanced by
// the group delay and cut to the input length so it stays time-aligned with
// the input; otherwise the output is the causal convolution cut to the input
// length.
absl::StatusOr<AudioBuffer> ApplyFir(const AudioBuffer& x,
                                     const FirFilter& filter,
                                     bool compensate_delay);

}  // namespace cadenza

#endif  // CADENZA_FIR_H_
