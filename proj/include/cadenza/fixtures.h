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

#ifndef CADENZA_FIXTURES_H_
#define CADENZA_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "cadenza/audiology.h"
#include "cadenza/hrir.h"
#include "cadenza/scene_dataset.h"

namespace cadenza {

// Synthetic four-stem track: a vibrato harmonic voice, kick and snare
// bursts, a bass line and a wide noisy pad. Spectra overlap so demixing
// errors are audible, and every stem is active throughout.
Track MakeSyntheticTrack(std::string id, int sample_rate_hz, double dur_s,
                         uint64_t seed);

// Simple spherical-head style responses: the ipsilateral microphone gets a
// delayed impulse, the contralateral one a later, attenuated and smoothed
// impulse. Covers the ICASSP24 azimuth grid on both sides.
std::vector<HrirSet> MakeSyntheticHrirs(int sample_rate_hz, int num_subjects,
                                        uint64_t seed);

// Five listeners with sloping losses whose better-ear grades run from no
// impairment to moderately severe.
std::vector<Listener> MakeSyntheticListeners();

struct FixtureDataOptions {
  int sample_rate_hz = 44100;
  int num_tracks = 4;
  double track_dur_s = 50.0;
  int num_hrir_subjects = 2;
  uint64_t seed = 1;
};

// Lays out a data root: listeners.json, hrir/index.json and
// music/<track>/{vocals,drums,bass,other,mixture}.wav.
absl::Status WriteFixtureDataRoot(const std::filesystem::path& root,
                                  const FixtureDataOptions& options);

}  // namespace cadenza

#endif  // CADENZA_FIXTURES_H_
