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

#ifndef CADENZA_AUDIOLOGY_H_
#define CADENZA_AUDIOLOGY_H_

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace cadenza {

inline constexpr size_t kNumAudiometricFrequencies = 8;

inline constexpr std::array<double, kNumAudiometricFrequencies>
    kAudiometricFrequenciesHz = {250, 500, 1000, 2000, 3000, 4000, 6000, 8000};

// Thresholds above this are clamped on ingestion.
inline constexpr double kMaxThresholdDbHl = 80.0;

// Pure-tone thresholds in dB HL at kAudiometricFrequenciesHz, each in
// [0, kMaxThresholdDbHl].
class Audiogram {
 public:
  using Levels = std::array<double, kNumAudiometricFrequencies>;

  // Rejects non-finite or out-of-range levels.
  static absl::StatusOr<Audiogram> Create(const Levels& thresholds_db_hl);

  // Clamps levels into [0, kMaxThresholdDbHl], appending one message per
  // clamped value to `warnings` when non-null. Non-finite levels still fail.
  static absl::StatusOr<Audiogram> CreateClamped(
      const Levels& thresholds_db_hl, std::vector<std::string>* warnings,
      std::string_view context = "");

  static Audiogram Flat(double level_db_hl);

  const Levels& thresholds_db_hl() const { return thresholds_; }

  // Threshold at an audiometric frequency; fails for any other frequency.
  absl::StatusOr<double> ThresholdAt(double frequency_hz) const;

  // Linear interpolation on a log-frequency axis, held constant outside
  // [250, 8000] Hz.
  double InterpolatedThreshold(double frequency_hz) const;

  friend bool operator==(const Audiogram&, const Audiogram&) = default;

 private:
  explicit Audiogram(const Levels& t) : thresholds_(t) {}
  Levels thresholds_{};
};

struct Listener {
  std::string id;
  Audiogram left;
  Audiogram right;
};

enum class SeverityGrade {
  kNoImpairment = 0,
  kMild = 1,
  kModerate = 2,
  kModeratelySevere = 3,
  kSevere = 4,
  kProfound = 5,
};

std::string_view SeverityName(SeverityGrade grade);

// Ordinal code 0..5 in grade order.
inline int SeverityCode(SeverityGrade grade) { return static_cast<int>(grade); }

// Mean threshold at 500, 1000, 2000 and 4000 Hz.
double FourFrequencyAverage(const Audiogram& audiogram);

// Bands start at 20, 35, 50, 65 and 80 dB; a value on a band edge belongs
// to the band above it. Negative values are treated as 0.
SeverityGrade ClassifySeverity(double four_frequency_average_db);

// Grade of the ear with the lower four-frequency average.
SeverityGrade BetterEarSeverity(const Listener& listener);

// Grade of the per-frequency average of both ears.
SeverityGrade MeanEarSeverity(const Listener& listener);

struct ListenerDataset {
  std::vector<Listener> listeners;
  // One entry per clamped threshold.
  std::vector<std::string> warnings;
};

// Parses the listener manifest:
//   { "<id>": { "audiogram_cfs": [250, ..., 8000],
//               "levels_l": [8 numbers], "levels_r": [8 numbers] }, ... }
// Record order is preserved.
absl::StatusOr<ListenerDataset> ParseListeners(std::string_view json_text);
absl::StatusOr<ListenerDataset> LoadListeners(
    const std::filesystem::path& path);

std::string SerializeListeners(std::span<const Listener> listeners);
absl::Status SaveListeners(const std::filesystem::path& path,
                           std::span<const Listener> listeners);

// Finds a listener by id, or nullptr.
const Listener* FindListener(std::span<const Listener> listeners,
                             std::string_view id);

}  // namespace cadenza

#endif  // CADENZA_AUDIOLOGY_H_
