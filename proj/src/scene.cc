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

#include "cadenza/scene.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "cadenza/rng.h"
#include "json.hpp"

namespace cadenza {
namespace {

using Json = nlohmann::ordered_json;

bool OnGrid(double value, std::span<const double> grid) {
  return std::any_of(grid.begin(), grid.end(),
                     [value](double g) { return std::abs(value - g) < 1e-9; });
}

// Partial Fisher-Yates: the first k entries become a uniform k-subset in
// uniform order.
template <typename T>
void ShuffleFirst(std::vector<T>& v, size_t k, Rng& rng) {
  for (size_t i = 0; i < k && i + 1 < v.size(); ++i) {
    const size_t j =
        std::uniform_int_distribution<size_t>(i, v.size() - 1)(rng);
    std::swap(v[i], v[j]);
  }
}

Json OptionalNumber(const std::optional<double>& v) {
  return v.has_value() ? Json(*v) : Json(nullptr);
}

}  // namespace

std::string_view ChallengeModeName(ChallengeMode mode) {
  return mode == ChallengeMode::kCad1 ? "CAD1" : "ICASSP24";
}

std::optional<ChallengeMode> ParseChallengeMode(std::string_view name) {
  if (name == "CAD1") return ChallengeMode::kCad1;
  if (name == "ICASSP24") return ChallengeMode::kIcassp24;
  return std::nullopt;
}

double SegmentDurationS(ChallengeMode mode) {
  return mode == ChallengeMode::kCad1 ? 30.0 : 10.0;
}

std::vector<double> SegmentIndex::EligibleStarts() const {
  std::vector<double> out;
  for (const Segment& s : segments) {
    if (s.eligible()) out.push_back(s.start_s);
  }
  return out;
}

double WindowRmsDbfs(const AudioBuffer& audio, size_t begin, size_t count) {
  double energy = 0.0;
  size_t n = 0;
  for (int c = 0; c < audio.num_channels(); ++c) {
    auto ch = audio.channel(c);
    const size_t e = std::min(ch.size(), begin + count);
    for (size_t i = begin; i < e; ++i) energy += ch[i] * ch[i];
    n += e > begin ? e - begin : 0;
  }
  if (n == 0 || energy == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(energy / static_cast<double>(n));
}

std::array<bool, 4> ActiveStems(const StemSet& stems, size_t begin,
                                size_t count, double silence_floor_dbfs) {
  std::array<bool, 4> active{};
  for (Stem s : kAllStems) {
    active[static_cast<size_t>(s)] =
        WindowRmsDbfs(stems.stem(s), begin, count) > silence_floor_dbfs;
  }
  return active;
}

absl::StatusOr<SegmentIndex> SegmentTrack(std::string track_id,
                                          const StemSet& stems, double dur_s,
                                          double silence_floor_dbfs) {
  if (!(dur_s > 0.0)) {
    return absl::InvalidArgumentError("segment duration must be positive");
  }
  const int fs = stems.sample_rate_hz();
  const size_t window = static_cast<size_t>(std::llround(dur_s * fs));
  if (stems.num_frames() < window) {
    return absl::InvalidArgumentError(
        absl::StrCat("track ", track_id, " lasts ",
                     static_cast<double>(stems.num_frames()) / fs,
                     " s, shorter than one ", dur_s, " s segment"));
  }
  SegmentIndex index;
  index.track_id = std::move(track_id);
  index.sample_rate_hz = fs;
  index.track_frames = stems.num_frames();
  index.segment_dur_s = dur_s;
  for (size_t begin = 0; begin + window <= stems.num_frames();
       begin += window) {
    Segment seg;
    seg.start_s = static_cast<double>(begin) / fs;
    seg.active = ActiveStems(stems, begin, window, silence_floor_dbfs);
    index.segments.push_back(seg);
  }
  return index;
}

size_t SegmentStartFrame(const SceneSpec& scene, int sample_rate_hz) {
  return static_cast<size_t>(
      std::llround(scene.segment_start_s * sample_rate_hz));
}

size_t SegmentFrames(const SceneSpec& scene, int sample_rate_hz) {
  return static_cast<size_t>(
      std::llround(scene.segment_dur_s * sample_rate_hz));
}

absl::Status ValidateScene(const SceneSpec& scene, ChallengeMode mode) {
  auto fail = [&](std::string_view what) {
    return absl::InvalidArgumentError(
        absl::StrCat("scene ", scene.scene_id, ": ", std::string(what)));
  };
  if (scene.scene_id.empty()) return fail("empty scene id");
  if (scene.segment_dur_s != SegmentDurationS(mode)) {
    return fail(absl::StrCat("segment duration ", scene.segment_dur_s,
                             " s does not match mode ",
                             std::string(ChallengeModeName(mode))));
  }
  if (!(scene.segment_start_s >= 0.0)) return fail("negative segment start");
  if (!scene.gains.IsFinite()) return fail("non-finite gain");
  if (scene.listener_ids.empty()) return fail("no listeners assigned");
  if (mode == ChallengeMode::kCad1) {
    if (scene.hrtf_subject || scene.angle_left_deg || scene.angle_right_deg) {
      return fail("CAD1 scenes carry no HRTF rendering");
    }
    if (scene.gains.NumAltered() != 0)
      return fail("CAD1 scenes carry no gains");
    return absl::OkStatus();
  }
  if (!scene.hrtf_subject || !scene.angle_left_deg || !scene.angle_right_deg) {
    return fail("ICASSP24 scenes need an HRTF subject and both angles");
  }
  if (!OnGrid(*scene.angle_left_deg, kSpeakerAzimuthsDeg)) {
    return fail(
        absl::StrCat("left angle ", *scene.angle_left_deg, " is off the grid"));
  }
  if (!OnGrid(-*scene.angle_right_deg, kSpeakerAzimuthsDeg)) {
    return fail(absl::StrCat("right angle ", *scene.angle_right_deg,
                             " is off the grid"));
  }
  const int altered = scene.gains.NumAltered();
  if (altered < 1 || altered > 3) {
    return fail(absl::StrCat(altered, " stems altered, expected 1 to 3"));
  }
  for (double g : scene.gains.db) {
    if (g != 0.0 && !OnGrid(g, kRemixGainValuesDb)) {
      return fail(absl::StrCat("gain ", g, " dB is off the grid"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<SceneSpec> SampleScene(uint64_t seed, std::string scene_id,
                                      const SegmentIndex& track,
                                      const ScenePools& pools,
                                      ChallengeMode mode,
                                      std::optional<double> segment_start_s) {
  if (pools.listener_ids.empty()) {
    return absl::InvalidArgumentError("listener pool is empty");
  }
  if (mode == ChallengeMode::kIcassp24 && pools.hrtf_subjects.empty()) {
    return absl::InvalidArgumentError("HRTF subject pool is empty");
  }
  if (pools.listeners_per_scene < 0 ||
      static_cast<size_t>(pools.listeners_per_scene) >
          pools.listener_ids.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "cannot assign ", pools.listeners_per_scene,
        " listeners per scene from a pool of ", pools.listener_ids.size()));
  }
  Rng rng(seed);
  SceneSpec scene;
  scene.scene_id = std::move(scene_id);
  scene.track_id = track.track_id;
  scene.segment_dur_s = SegmentDurationS(mode);
  scene.rng_seed = seed;

  if (segment_start_s.has_value()) {
    scene.segment_start_s = *segment_start_s;
  } else {
    const std::vector<double> starts = track.EligibleStarts();
    if (starts.empty()) {
      return absl::FailedPreconditionError(
          absl::StrCat("track ", track.track_id, " has no eligible segment"));
    }
    scene.segment_start_s = starts[UniformIndex(rng, starts.size())];
  }

  if (mode == ChallengeMode::kIcassp24) {
    scene.hrtf_subject =
        pools.hrtf_subjects[UniformIndex(rng, pools.hrtf_subjects.size())];
    const size_t pair = UniformIndex(rng, 9);
    scene.angle_left_deg = kSpeakerAzimuthsDeg[pair / 3];
    scene.angle_right_deg = -kSpeakerAzimuthsDeg[pair % 3];
    const size_t altered = 1 + UniformIndex(rng, 3);
    std::vector<size_t> order = {0, 1, 2, 3};
    ShuffleFirst(order, altered, rng);
    for (size_t i = 0; i < altered; ++i) {
      scene.gains.db[order[i]] =
          kRemixGainValuesDb[UniformIndex(rng, kRemixGainValuesDb.size())];
    }
  }

  const size_t want = pools.listeners_per_scene == 0
                          ? pools.listener_ids.size()
                          : static_cast<size_t>(pools.listeners_per_scene);
  std::vector<size_t> idx(pools.listener_ids.size());
  std::iota(idx.begin(), idx.end(), 0);
  ShuffleFirst(idx, want, rng);
  idx.resize(want);
  std::sort(idx.begin(), idx.end());
  for (size_t i : idx) scene.listener_ids.push_back(pools.listener_ids[i]);
  return scene;
}

std::string SerializeScenes(std::span<const SceneSpec> scenes) {
  Json root = Json::array();
  for (const SceneSpec& s : scenes) {
    Json j;
    j["scene_id"] = s.scene_id;
    j["track_id"] = s.track_id;
    j["segment_start_s"] = s.segment_start_s;
    j["segment_dur_s"] = s.segment_dur_s;
    j["hrtf_subject"] =
        s.hrtf_subject.has_value() ? Json(*s.hrtf_subject) : Json(nullptr);
    j["angle_left_deg"] = OptionalNumber(s.angle_left_deg);
    j["angle_right_deg"] = OptionalNumber(s.angle_right_deg);
    Json gains;
    for (Stem stem : kAllStems) {
      gains[std::string(StemName(stem))] = s.gains.gain_db(stem);
    }
    j["gains"] = std::move(gains);
    j["listener_ids"] = s.listener_ids;
    j["rng_seed"] = s.rng_seed;
    root.push_back(std::move(j));
  }
  return root.dump(2) + "\n";
}

absl::StatusOr<std::vector<SceneSpec>> ParseScenes(std::string_view json_text) {
  Json root = Json::parse(json_text.begin(), json_text.end(), nullptr,
                          /*allow_exceptions=*/false);
  if (root.is_discarded() || !root.is_array()) {
    return absl::InvalidArgumentError("scene manifest must be a JSON array");
  }
  std::vector<SceneSpec> scenes;
  for (size_t i = 0; i < root.size(); ++i) {
    const Json& j = root[i];
    auto bad = [&](std::string_view field) {
      return absl::InvalidArgumentError(absl::StrCat("scene manifest entry ", i,
                                                     ": missing or malformed '",
                                                     std::string(field), "'"));
    };
    if (!j.is_object()) return bad("object");
    SceneSpec s;
    if (!j.contains("scene_id") || !j["scene_id"].is_string()) {
      return bad("scene_id");
    }
    s.scene_id = j["scene_id"].get<std::string>();
    if (!j.contains("track_id") || !j["track_id"].is_string()) {
      return bad("track_id");
    }
    s.track_id = j["track_id"].get<std::string>();
    for (const char* f : {"segment_start_s", "segment_dur_s"}) {
      if (!j.contains(f) || !j[f].is_number()) return bad(f);
    }
    s.segment_start_s = j["segment_start_s"].get<double>();
    s.segment_dur_s = j["segment_dur_s"].get<double>();
    if (j.contains("hrtf_subject") && !j["hrtf_subject"].is_null()) {
      if (!j["hrtf_subject"].is_string()) return bad("hrtf_subject");
      s.hrtf_subject = j["hrtf_subject"].get<std::string>();
    }
    for (const char* f : {"angle_left_deg", "angle_right_deg"}) {
      if (j.contains(f) && !j[f].is_null()) {
        if (!j[f].is_number()) return bad(f);
        (std::string_view(f) == "angle_left_deg" ? s.angle_left_deg
                                                 : s.angle_right_deg) =
            j[f].get<double>();
      }
    }
    if (!j.contains("gains") || !j["gains"].is_object()) return bad("gains");
    for (Stem stem : kAllStems) {
      const std::string name(StemName(stem));
      if (!j["gains"].contains(name) || !j["gains"][name].is_number()) {
        return bad(absl::StrCat("gains.", name));
      }
      s.gains.gain_db(stem) = j["gains"][name].get<double>();
    }
    if (!j.contains("listener_ids") || !j["listener_ids"].is_array()) {
      return bad("listener_ids");
    }
    for (const Json& id : j["listener_ids"]) {
      if (!id.is_string()) return bad("listener_ids");
      s.listener_ids.push_back(id.get<std::string>());
    }
    if (!j.contains("rng_seed") || !j["rng_seed"].is_number_integer()) {
      return bad("rng_seed");
    }
    s.rng_seed = j["rng_seed"].get<uint64_t>();
    scenes.push_back(std::move(s));
  }
  return scenes;
}

}  // namespace cadenza
