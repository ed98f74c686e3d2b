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

#include "cadenza/scene_dataset.h"

#include <algorithm>
#include <mutex>
#include <optional>
#include <system_error>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "cadenza/file_util.h"
#include "cadenza/parallel.h"
#include "cadenza/rng.h"
#include "cadenza/wav_io.h"
#include "json.hpp"

namespace cadenza {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kMaxFreeStartAttempts = 256;
constexpr char kDatasetFile[] = "dataset.json";
constexpr char kScenesFile[] = "scenes.json";
constexpr char kListenersFile[] = "listeners.json";
constexpr char kHrirIndexFile[] = "hrir/index.json";

// Segment starts for one track's scenes, drawn from the track's own stream.
absl::StatusOr<std::vector<double>> DrawSegmentStarts(
    const Track& track, const SegmentIndex& index,
    const SceneDatasetOptions& options, Rng& rng) {
  const size_t want = static_cast<size_t>(options.scenes_per_track);
  std::vector<double> eligible = index.EligibleStarts();
  std::vector<double> starts;
  if (options.mode == ChallengeMode::kIcassp24) {
    if (eligible.size() < want) {
      return absl::FailedPreconditionError(absl::StrCat(
          "track ", track.id, ": ", eligible.size(), " eligible of ",
          index.segments.size(), " segments, ", want, " needed"));
    }
    for (size_t i = 0; i < want; ++i) {
      const size_t j =
          std::uniform_int_distribution<size_t>(i, eligible.size() - 1)(rng);
      std::swap(eligible[i], eligible[j]);
      starts.push_back(eligible[i]);
    }
    return starts;
  }
  const int fs = track.stems.sample_rate_hz();
  const size_t window =
      static_cast<size_t>(std::llround(index.segment_dur_s * fs));
  const size_t last = track.stems.num_frames() - window;
  for (size_t k = 0; k < want; ++k) {
    bool found = false;
    for (int a = 0; a < kMaxFreeStartAttempts && !found; ++a) {
      const size_t begin = std::uniform_int_distribution<size_t>(0, last)(rng);
      const auto active =
          ActiveStems(track.stems, begin, window, options.silence_floor_dbfs);
      if (std::all_of(active.begin(), active.end(), [](bool b) { return b; })) {
        starts.push_back(static_cast<double>(begin) / fs);
        found = true;
      }
    }
    if (!found) {
      if (eligible.empty()) {
        return absl::FailedPreconditionError(
            absl::StrCat("track ", track.id, ": no ", index.segment_dur_s,
                         " s window has all four stems active"));
      }
      starts.push_back(eligible[UniformIndex(rng, eligible.size())]);
    }
  }
  return starts;
}

absl::Status WriteSceneAudio(const std::filesystem::path& scene_dir,
                             const Track& track, const SceneSpec& scene,
                             std::span<const HrirSet> hrirs) {
  const int fs = track.stems.sample_rate_hz();
  const StemSet seg =
      track.stems.Slice(SegmentStartFrame(scene, fs), SegmentFrames(scene, fs));
  for (Stem s : kAllStems) {
    absl::Status st =
        WriteWav(scene_dir / absl::StrCat(std::string(StemName(s)), ".wav"),
                 seg.stem(s), SampleFormat::kFloat32);
    if (!st.ok()) return st;
  }
  const AudioBuffer program =
      seg.mixture().has_value() ? *seg.mixture() : seg.Sum();
  auto presented = PresentToListenerPosition(program, scene, hrirs);
  if (!presented.ok()) return presented.status();
  return WriteWav(scene_dir / "mixture.wav", *presented,
                  SampleFormat::kFloat32);
}

}  // namespace

absl::StatusOr<std::vector<Track>> LoadTracks(
    const std::filesystem::path& music_dir, int sample_rate_hz) {
  std::error_code ec;
  if (!std::filesystem::is_directory(music_dir, ec)) {
    return absl::NotFoundError(
        absl::StrCat("music directory not found: ", music_dir.string()));
  }
  std::vector<std::filesystem::path> dirs;
  for (const auto& e : std::filesystem::directory_iterator(music_dir)) {
    if (e.is_directory()) dirs.push_back(e.path());
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<Track> tracks;
  for (const auto& d : dirs) {
    std::array<AudioBuffer, 4> stems;
    for (Stem s : kAllStems) {
      auto a =
          ReadWavExpecting(d / absl::StrCat(std::string(StemName(s)), ".wav"),
                           sample_rate_hz, 2);
      if (!a.ok()) {
        return absl::Status(a.status().code(),
                            absl::StrCat("track ", d.filename().string(), ": ",
                                         a.status().message()));
      }
      stems[static_cast<size_t>(s)] = std::move(*a);
    }
    std::optional<AudioBuffer> mixture;
    if (std::filesystem::exists(d / "mixture.wav")) {
      auto m = ReadWavExpecting(d / "mixture.wav", sample_rate_hz, 2);
      if (!m.ok()) return m.status();
      mixture = std::move(*m);
    }
    auto set = StemSet::Create(std::move(stems), std::move(mixture));
    if (!set.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "track ", d.filename().string(), ": ", set.status().message()));
    }
    tracks.push_back({d.filename().string(), std::move(*set)});
  }
  return tracks;
}

absl::StatusOr<AudioBuffer> PresentToListenerPosition(
    const AudioBuffer& program, const SceneSpec& scene,
    std::span<const HrirSet> hrirs) {
  if (!scene.hrtf_subject.has_value()) return program;
  const HrirSet* set = FindHrirSet(hrirs, *scene.hrtf_subject);
  if (set == nullptr) {
    return absl::NotFoundError(absl::StrCat("scene ", scene.scene_id,
                                            ": unknown HRTF subject ",
                                            *scene.hrtf_subject));
  }
  if (!scene.angle_left_deg || !scene.angle_right_deg) {
    return absl::InvalidArgumentError(
        absl::StrCat("scene ", scene.scene_id, " has no speaker angles"));
  }
  return RenderAtEars(program, *set, *scene.angle_left_deg,
                      *scene.angle_right_deg);
}

absl::StatusOr<std::vector<SceneSpec>> PlanSceneDataset(
    std::span<const Track> tracks, std::span<const Listener> listeners,
    std::span<const HrirSet> hrirs, const SceneDatasetOptions& options) {
  if (options.scenes_per_track < 0) {
    return absl::InvalidArgumentError("scenes_per_track must be >= 0");
  }
  std::vector<SceneSpec> scenes;
  if (options.scenes_per_track == 0 || tracks.empty()) return scenes;

  std::vector<std::string> listener_ids;
  for (const Listener& l : listeners) listener_ids.push_back(l.id);
  std::vector<std::string> subjects;
  for (const HrirSet& h : hrirs) subjects.push_back(h.subject_id());
  ScenePools pools{listener_ids, subjects, options.listeners_per_scene};

  const double dur = SegmentDurationS(options.mode);
  std::vector<std::string> problems;
  std::vector<std::vector<double>> starts(tracks.size());
  std::vector<SegmentIndex> indexes(tracks.size());
  for (size_t t = 0; t < tracks.size(); ++t) {
    auto index = SegmentTrack(tracks[t].id, tracks[t].stems, dur,
                              options.silence_floor_dbfs);
    if (!index.ok()) {
      problems.push_back(std::string(index.status().message()));
      continue;
    }
    Rng rng(DeriveSeed(DeriveSeed(options.master_seed, t), 0));
    auto s = DrawSegmentStarts(tracks[t], *index, options, rng);
    if (!s.ok()) {
      problems.push_back(std::string(s.status().message()));
      continue;
    }
    starts[t] = std::move(*s);
    indexes[t] = std::move(*index);
  }
  if (!problems.empty()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "insufficient eligible segments: ", absl::StrJoin(problems, "; ")));
  }

  for (size_t t = 0; t < tracks.size(); ++t) {
    const uint64_t track_seed = DeriveSeed(options.master_seed, t);
    for (size_t k = 0; k < starts[t].size(); ++k) {
      const size_t n = scenes.size();
      auto scene = SampleScene(DeriveSeed(track_seed, k + 1),
                               absl::StrFormat("S%05d", n), indexes[t], pools,
                               options.mode, starts[t][k]);
      if (!scene.ok()) return scene.status();
      scenes.push_back(std::move(*scene));
    }
  }
  return scenes;
}

absl::Status WriteSceneDataset(const std::filesystem::path& out_dir,
                               std::span<const Track> tracks,
                               std::span<const Listener> listeners,
                               std::span<const HrirSet> hrirs,
                               const SceneDatasetOptions& options,
                               std::span<const SceneSpec> scenes) {
  const int fs = tracks.empty() ? 0 : tracks[0].stems.sample_rate_hz();
  Json meta;
  meta["mode"] = std::string(ChallengeModeName(options.mode));
  meta["sample_rate_hz"] = fs;
  meta["segment_dur_s"] = SegmentDurationS(options.mode);
  meta["master_seed"] = options.master_seed;
  meta["hrir_index"] = options.mode == ChallengeMode::kIcassp24
                           ? Json(kHrirIndexFile)
                           : Json(nullptr);
  meta["listeners"] = kListenersFile;
  absl::Status st = WriteTextFile(out_dir / kDatasetFile, meta.dump(2) + "\n");
  if (!st.ok()) return st;
  st = WriteTextFile(out_dir / kScenesFile, SerializeScenes(scenes));
  if (!st.ok()) return st;
  st = SaveListeners(out_dir / kListenersFile, listeners);
  if (!st.ok()) return st;
  if (options.mode == ChallengeMode::kIcassp24) {
    st = WriteHrirIndex(out_dir / "hrir", hrirs);
    if (!st.ok()) return st;
  }

  std::vector<absl::Status> results(scenes.size());
  ParallelFor(scenes.size(), options.jobs, [&](size_t i) {
    const SceneSpec& scene = scenes[i];
    auto it = std::find_if(tracks.begin(), tracks.end(), [&](const Track& t) {
      return t.id == scene.track_id;
    });
    if (it == tracks.end()) {
      results[i] = absl::NotFoundError(absl::StrCat(
          "scene ", scene.scene_id, ": unknown track ", scene.track_id));
      return;
    }
    results[i] =
        WriteSceneAudio(out_dir / "scenes" / scene.scene_id, *it, scene, hrirs);
  });
  for (const absl::Status& r : results) {
    if (!r.ok()) return r;
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<SceneSpec>> GenerateSceneDataset(
    const std::filesystem::path& data_root,
    const std::filesystem::path& out_dir, const SceneDatasetOptions& options) {
  const std::filesystem::path music = data_root / "music";
  std::error_code ec;
  std::optional<std::filesystem::path> first;
  for (const auto& e : std::filesystem::directory_iterator(music, ec)) {
    if (e.is_directory() && (!first.has_value() || e.path() < *first)) {
      first = e.path();
    }
  }
  if (!first.has_value()) {
    return absl::NotFoundError(
        absl::StrCat("no tracks under ", music.string()));
  }
  auto info = ReadWavInfo(*first / "vocals.wav");
  if (!info.ok()) return info.status();
  auto tracks = LoadTracks(music, info->sample_rate_hz);
  if (!tracks.ok()) return tracks.status();
  auto listeners = LoadListeners(data_root / kListenersFile);
  if (!listeners.ok()) return listeners.status();
  std::vector<HrirSet> hrirs;
  if (options.mode == ChallengeMode::kIcassp24) {
    auto loaded = LoadHrirIndex(data_root / kHrirIndexFile);
    if (!loaded.ok()) return loaded.status();
    hrirs = *std::move(loaded);
  }
  auto scenes = PlanSceneDataset(*tracks, listeners->listeners, hrirs, options);
  if (!scenes.ok()) return scenes.status();
  absl::Status st = WriteSceneDataset(out_dir, *tracks, listeners->listeners,
                                      hrirs, options, *scenes);
  if (!st.ok()) return st;
  return scenes;
}

absl::StatusOr<SceneDataset> SceneDataset::Open(
    const std::filesystem::path& dir) {
  auto text = ReadTextFile(dir / kDatasetFile);
  if (!text.ok()) return text.status();
  Json meta = Json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (meta.is_discarded() || !meta.is_object() || !meta.contains("mode") ||
      !meta["mode"].is_string() || !meta.contains("sample_rate_hz") ||
      !meta["sample_rate_hz"].is_number_integer()) {
    return absl::InvalidArgumentError(
        absl::StrCat((dir / kDatasetFile).string(), " is malformed"));
  }
  SceneDataset ds;
  ds.dir_ = dir;
  auto mode = ParseChallengeMode(meta["mode"].get<std::string>());
  if (!mode) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown mode ", meta["mode"].get<std::string>()));
  }
  ds.mode_ = *mode;
  ds.sample_rate_hz_ = meta["sample_rate_hz"].get<int>();
  ds.master_seed_ = meta.value("master_seed", uint64_t{0});

  auto scenes_text = ReadTextFile(dir / kScenesFile);
  if (!scenes_text.ok()) return scenes_text.status();
  auto scenes = ParseScenes(*scenes_text);
  if (!scenes.ok()) return scenes.status();
  ds.scenes_ = std::move(*scenes);

  auto listeners = LoadListeners(dir / meta.value("listeners", kListenersFile));
  if (!listeners.ok()) return listeners.status();
  ds.listeners_ = std::move(listeners->listeners);

  if (meta.contains("hrir_index") && meta["hrir_index"].is_string()) {
    auto hrirs = LoadHrirIndex(dir / meta["hrir_index"].get<std::string>());
    if (!hrirs.ok()) return hrirs.status();
    ds.hrirs_ = std::move(*hrirs);
  }
  for (const SceneSpec& s : ds.scenes_) {
    absl::Status st = ValidateScene(s, ds.mode_);
    if (!st.ok()) return st;
    for (const std::string& id : s.listener_ids) {
      if (ds.FindListenerById(id) == nullptr) {
        return absl::InvalidArgumentError(
            absl::StrCat("scene ", s.scene_id, " names unknown listener ", id));
      }
    }
  }
  return ds;
}

size_t SceneDataset::NumPairs() const {
  size_t n = 0;
  for (const SceneSpec& s : scenes_) n += s.listener_ids.size();
  return n;
}

const SceneSpec* SceneDataset::FindScene(std::string_view scene_id) const {
  for (const SceneSpec& s : scenes_) {
    if (s.scene_id == scene_id) return &s;
  }
  return nullptr;
}

const Listener* SceneDataset::FindListenerById(
    std::string_view listener_id) const {
  return FindListener(listeners_, listener_id);
}

std::filesystem::path SceneDataset::SceneDir(std::string_view scene_id) const {
  return dir_ / "scenes" / std::string(scene_id);
}

absl::StatusOr<AudioBuffer> SceneDataset::LoadMixture(
    std::string_view scene_id) const {
  return ReadWavExpecting(SceneDir(scene_id) / "mixture.wav", sample_rate_hz_,
                          2);
}

absl::StatusOr<StemSet> SceneDataset::LoadStems(
    std::string_view scene_id) const {
  std::array<AudioBuffer, 4> stems;
  for (Stem s : kAllStems) {
    auto a = ReadWavExpecting(
        SceneDir(scene_id) / absl::StrCat(std::string(StemName(s)), ".wav"),
        sample_rate_hz_, 2);
    if (!a.ok()) return a.status();
    stems[static_cast<size_t>(s)] = std::move(*a);
  }
  return StemSet::Create(std::move(stems));
}

}  // namespace cadenza
