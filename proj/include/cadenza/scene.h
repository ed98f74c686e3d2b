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

#ifndef CADENZA_SCENE_H_
#define CADENZA_SCENE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cadenza/audio_buffer.h"

namespace cadenza {

// CAD1: headphone listening, 30 s extracts, no per-scene gains.
// ICASSP24: loudspeakers heard through hearing-aid microphones, 10 s
// extracts with random remix gains.
enum class ChallengeMode { kCad1, kIcassp24 };

std::string_view ChallengeModeName(ChallengeMode mode);
std::optional<ChallengeMode> ParseChallengeMode(std::string_view name);
double SegmentDurationS(ChallengeMode mode);

inline constexpr double kDefaultSilenceFloorDbfs = -60.0;

// Loudspeaker azimuth magnitudes; left speakers are positive, right negative.
inline constexpr std::array<double, 3> kSpeakerAzimuthsDeg = {22.5, 30.0, 37.5};
inline constexpr std::array<double, 6> kRemixGainValuesDb = {-10.0, -6.0, -3.0,
                                                             3.0,   6.0,  10.0};

struct Segment {
  double start_s = 0.0;
  std::array<bool, 4> active = {false, false, false, false};

  bool eligible() const {
    return active[0] && active[1] && active[2] && active[3];
  }
};

// Consecutive fixed-length windows of one track with per-stem activity.
struct SegmentIndex {
  std::string track_id;
  int sample_rate_hz = 0;
  size_t track_frames = 0;
  double segment_dur_s = 0.0;
  std::vector<Segment> segments;

  std::vector<double> EligibleStarts() const;
};

// RMS level in dBFS over frames [begin, begin + count) of both channels;
// -inf for digital silence.
double WindowRmsDbfs(const AudioBuffer& audio, size_t begin, size_t count);

// Which stems exceed `silence_floor_dbfs` over the window.
std::array<bool, 4> ActiveStems(const StemSet& stems, size_t begin,
                                size_t count, double silence_floor_dbfs);

// Cuts the track into consecutive windows of `dur_s` from t = 0, dropping a
// trailing partial window.
absl::StatusOr<SegmentIndex> SegmentTrack(
    std::string track_id, const StemSet& stems, double dur_s,
    double silence_floor_dbfs = kDefaultSilenceFloorDbfs);

struct SceneSpec {
  std::string scene_id;
  std::string track_id;
  double segment_start_s = 0.0;
  double segment_dur_s = 0.0;
  std::optional<std::string> hrtf_subject;
  std::optional<double> angle_left_deg;
  std::optional<double> angle_right_deg;
  GainSet gains;
  std::vector<std::string> listener_ids;
  uint64_t rng_seed = 0;

  friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

// First frame and frame count of the scene's segment at `sample_rate_hz`.
size_t SegmentStartFrame(const SceneSpec& scene, int sample_rate_hz);
size_t SegmentFrames(const SceneSpec& scene, int sample_rate_hz);

// Checks the mode's invariants: segment duration, angle grid, and for
// ICASSP24 that 1 to 3 gains are nonzero and drawn from the gain grid.
// CAD1 scenes carry no HRTF, no angles and all-zero gains.
absl::Status ValidateScene(const SceneSpec& scene, ChallengeMode mode);

// What a scene may draw from.
struct ScenePools {
  std::span<const std::string> listener_ids;
  std::span<const std::string> hrtf_subjects;  // unused in CAD1 mode
  // Listeners assigned per scene, drawn without replacement. 0 assigns the
  // whole pool.
  int listeners_per_scene = 0;
};

// Samples one scene from `seed` alone. The segment is drawn uniformly from
// the track's eligible windows unless `segment_start_s` fixes it.
absl::StatusOr<SceneSpec> SampleScene(
    uint64_t seed, std::string scene_id, const SegmentIndex& track,
    const ScenePools& pools, ChallengeMode mode,
    std::optional<double> segment_start_s = std::nullopt);

// Scene manifest JSON: an array of scene objects.
std::string SerializeScenes(std::span<const SceneSpec> scenes);
absl::StatusOr<std::vector<SceneSpec>> ParseScenes(std::string_view json_text);

}  // namespace cadenza

#endif  // CADENZA_SCENE_H_
