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

#ifndef CADENZA_HRIR_H_
#define CADENZA_HRIR_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cadenza/audio_buffer.h"

namespace cadenza {

enum class SpeakerSide { kLeft, kRight };

// Impulse responses from one loudspeaker to the front microphones of the
// left and right hearing aids.
struct HrirPair {
  std::vector<double> to_left_mic;
  std::vector<double> to_right_mic;
};

// One HRTF subject: responses for each loudspeaker side and azimuth.
class HrirSet {
 public:
  struct Entry {
    SpeakerSide side;
    double azimuth_deg;
    HrirPair irs;
  };

  // Every response must be non-empty and finite, each (side, azimuth) may
  // appear once, every azimuth magnitude must exist for both speaker sides,
  // and response lengths must lie within a factor of two of each other.
  static absl::StatusOr<HrirSet> Create(std::string subject_id,
                                        int sample_rate_hz,
                                        std::vector<Entry> entries);

  const std::string& subject_id() const { return subject_id_; }
  int sample_rate_hz() const { return sample_rate_hz_; }

  // nullptr when the azimuth is missing. Azimuths match to 0.1 degree.
  const HrirPair* Find(SpeakerSide side, double azimuth_deg) const;

  std::vector<double> Azimuths(SpeakerSide side) const;

 private:
  using Key = std::pair<SpeakerSide, int>;  // azimuth in tenths of a degree

  std::string subject_id_;
  int sample_rate_hz_ = 0;
  std::map<Key, HrirPair> entries_;
};

// Program (stereo loudspeaker feed) at the two hearing-aid microphones:
//   left_mic  = L * h(left spk -> left mic)  + R * h(right spk -> left mic)
//   right_mic = L * h(left spk -> right mic) + R * h(right spk -> right mic)
// trimmed to the program length.
absl::StatusOr<AudioBuffer> RenderAtEars(const AudioBuffer& program,
                                         const HrirSet& hrirs,
                                         double angle_left_deg,
                                         double angle_right_deg);

// HRIR index:
//   { "<subject>": { "sample_rate_hz": 44100,
//                    "left":  { "<azimuth>": { "left_mic": "<wav>",
//                                              "right_mic": "<wav>" } },
//                    "right": { ... } } }
// WAV paths are relative to the index file's directory.
absl::StatusOr<std::vector<HrirSet>> LoadHrirIndex(
    const std::filesystem::path& index_path);

// Writes each set's responses as mono float WAVs under `dir` plus
// `dir/index.json`.
absl::Status WriteHrirIndex(const std::filesystem::path& dir,
                            std::span<const HrirSet> sets);

const HrirSet* FindHrirSet(std::span<const HrirSet> sets,
                           std::string_view subject_id);

}  // namespace cadenza

#endif  // CADENZA_HRIR_H_
