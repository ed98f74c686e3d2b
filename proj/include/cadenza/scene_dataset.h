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

#ifndef CADENZA_SCENE_DATASET_H_
#define CADENZA_SCENE_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cadenza/audio_buffer.h"
#include "cadenza/audiology.h"
#include "cadenza/hrir.h"
#include "cadenza/scene.h"

namespace cadenza {

struct Track {
  std::string id;
  StemSet stems;
};

// Reads `music_dir/<track>/{vocals,drums,bass,other}.wav` (plus an optional
// mixture.wav) for every subdirectory, in name order. All audio must be
// stereo at `sample_rate_hz`.
absl::StatusOr<std::vector<Track>> LoadTracks(
    const std::filesystem::path& music_dir, int sample_rate_hz);

struct SceneDatasetOptions {
  ChallengeMode mode = ChallengeMode::kIcassp24;
  uint64_t master_seed = 0;
  int scenes_per_track = 1;
  // 0 assigns every listener to every scene.
  int listeners_per_scene = 0;
  double silence_floor_dbfs = kDefaultSilenceFloorDbfs;
  int jobs = 1;
};

// Draws the scene manifest. Each track gets its own seed stream; within a
// track, ICASSP24 scenes use distinct eligible windows and CAD1 scenes use
// free start times whose 30 s window has all stems active. Scene k of track
// t is sampled from its own derived seed, so the result does not depend on
// evaluation order.
absl::StatusOr<std::vector<SceneSpec>> PlanSceneDataset(
    std::span<const Track> tracks, std::span<const Listener> listeners,
    std::span<const HrirSet> hrirs, const SceneDatasetOptions& options);

// Writes a self-contained dataset directory:
//   dataset.json, scenes.json, listeners.json, hrir/ (ICASSP24 only),
//   scenes/<scene_id>/{mixture,vocals,drums,bass,other}.wav
// The mixture is the signal presented to systems (at the hearing-aid
// microphones in ICASSP24 mode); stems are the unprocessed true stems.
absl::Status WriteSceneDataset(const std::filesystem::path& out_dir,
                               std::span<const Track> tracks,
                               std::span<const Listener> listeners,
                               std::span<const HrirSet> hrirs,
                               const SceneDatasetOptions& options,
                               std::span<const SceneSpec> scenes);

// Read-only view of a dataset directory written by WriteSceneDataset.
// Loads a data root (listeners.json, hrir/index.json, music/<track>/) and
// plans and writes a scene set to `out_dir`. The sample rate is taken from
// the first track.
absl::StatusOr<std::vector<SceneSpec>> GenerateSceneDataset(
    const std::filesystem::path& data_root,
    const std::filesystem::path& out_dir, const SceneDatasetOptions& options);

class SceneDataset {
 public:
  static absl::StatusOr<SceneDataset> Open(const std::filesystem::path& dir);

  const std::filesystem::path& dir() const { return dir_; }
  ChallengeMode mode() const { return mode_; }
  int sample_rate_hz() const { return sample_rate_hz_; }
  uint64_t master_seed() const { return master_seed_; }
  const std::vector<SceneSpec>& scenes() const { return scenes_; }
  const std::vector<Listener>& listeners() const { return listeners_; }
  const std::vector<HrirSet>& hrirs() const { return hrirs_; }

  size_t NumPairs() const;
  const SceneSpec* FindScene(std::string_view scene_id) const;
  const Listener* FindListenerById(std::string_view listener_id) const;

  std::filesystem::path SceneDir(std::string_view scene_id) const;
  absl::StatusOr<AudioBuffer> LoadMixture(std::string_view scene_id) const;
  absl::StatusOr<StemSet> LoadStems(std::string_view scene_id) const;

 private:
  std::filesystem::path dir_;
  ChallengeMode mode_ = ChallengeMode::kIcassp24;
  int sample_rate_hz_ = 0;
  uint64_t master_seed_ = 0;
  std::vector<SceneSpec> scenes_;
  std::vector<Listener> listeners_;
  std::vector<HrirSet> hrirs_;
};

// Stem sum presented at the ears for a scene: HRTF-rendered in ICASSP24
// mode, unchanged in CAD1 mode.
absl::StatusOr<AudioBuffer> PresentToListenerPosition(
    const AudioBuffer& program, const SceneSpec& scene,
    std::span<const HrirSet> hrirs);

}  // namespace cadenza

#endif  // CADENZA_SCENE_DATASET_H_
