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

#ifndef CADENZA_AUDIO_BUFFER_H_
#define CADENZA_AUDIO_BUFFER_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace cadenza {

// Multichannel floating point audio. Samples are nominally in [-1, 1] but
// nothing is clipped here; clipping is only measured at quantization time.
class AudioBuffer {
 public:
  // Empty buffer; only useful as a placeholder to be assigned over.
  AudioBuffer() = default;

  // Fails unless 1 or 2 equal-length channels of finite samples are given
  // and the sample rate is positive.
  static absl::StatusOr<AudioBuffer> Create(
      int sample_rate_hz, std::vector<std::vector<double>> channels);

  static AudioBuffer Zeros(int sample_rate_hz, int num_channels,
                           size_t num_frames);

  int sample_rate_hz() const { return sample_rate_hz_; }
  int num_channels() const { return static_cast<int>(channels_.size()); }
  size_t num_frames() const {
    return channels_.empty() ? 0 : channels_.front().size();
  }
  bool empty() const { return num_frames() == 0; }

  std::span<const double> channel(int c) const { return channels_[c]; }
  std::span<double> mutable_channel(int c) { return channels_[c]; }

  double MaxAbs() const;

  // Frames [begin, begin + count), truncated at the end of the buffer.
  AudioBuffer Slice(size_t begin, size_t count) const;

  // Single-channel copy of channel `c`.
  AudioBuffer ChannelAsMono(int c) const;

  // Multiplies every sample by `gain` in place.
  void Scale(double gain);

 private:
  AudioBuffer(int sample_rate_hz, std::vector<std::vector<double>> channels)
      : sample_rate_hz_(sample_rate_hz), channels_(std::move(channels)) {}

  int sample_rate_hz_ = 0;
  std::vector<std::vector<double>> channels_;
};

// Builds a stereo buffer from two mono buffers of the same rate and length.
absl::StatusOr<AudioBuffer> MakeStereo(const AudioBuffer& left,
                                       const AudioBuffer& right);

enum class Stem { kVocals = 0, kDrums = 1, kBass = 2, kOther = 3 };

inline constexpr std::array<Stem, 4> kAllStems = {Stem::kVocals, Stem::kDrums,
                                                  Stem::kBass, Stem::kOther};

std::string_view StemName(Stem stem);
std::optional<Stem> StemFromName(std::string_view name);

// Relative RMS error allowed between a mixture and the sum of its stems.
inline constexpr double kDefaultStemSumTolerance = 1e-3;

// The VDBO decomposition of a stereo track, optionally with its mixture.
class StemSet {
 public:
  StemSet() = default;

  // All stems must be stereo and share sample rate and length. When a
  // mixture is given its relative RMS deviation from the stem sum must not
  // exceed `tolerance`; the measured deviation is kept.
  static absl::StatusOr<StemSet> Create(
      std::array<AudioBuffer, 4> stems,
      std::optional<AudioBuffer> mixture = std::nullopt,
      double tolerance = kDefaultStemSumTolerance);

  const AudioBuffer& stem(Stem s) const {
    return stems_[static_cast<size_t>(s)];
  }
  const std::array<AudioBuffer, 4>& stems() const { return stems_; }
  const std::optional<AudioBuffer>& mixture() const { return mixture_; }
  double mixture_relative_error() const { return mixture_relative_error_; }

  int sample_rate_hz() const { return stems_[0].sample_rate_hz(); }
  size_t num_frames() const { return stems_[0].num_frames(); }

  // Plain sum of the four stems.
  AudioBuffer Sum() const;

  StemSet Slice(size_t begin, size_t count) const;

 private:
  std::array<AudioBuffer, 4> stems_;
  std::optional<AudioBuffer> mixture_;
  double mixture_relative_error_ = 0.0;
};

// Per-stem remix gains in dB.
struct GainSet {
  std::array<double, 4> db = {0.0, 0.0, 0.0, 0.0};

  double gain_db(Stem s) const { return db[static_cast<size_t>(s)]; }
  double& gain_db(Stem s) { return db[static_cast<size_t>(s)]; }

  // Population standard deviation of the four gains.
  double SpreadDb() const;

  int NumAltered() const;

  // True when every gain is finite.
  bool IsFinite() const;

  friend bool operator==(const GainSet&, const GainSet&) = default;
};

double DbToAmplitude(double db);

}  // namespace cadenza

#endif  // CADENZA_AUDIO_BUFFER_H_
