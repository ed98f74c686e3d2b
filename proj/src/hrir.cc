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

#include "cadenza/hrir.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "cadenza/convolution.h"
#include "cadenza/file_util.h"
#include "cadenza/wav_io.h"
#include "json.hpp"

namespace cadenza {
namespace {

using Json = nlohmann::ordered_json;

int DeciDegrees(double azimuth_deg) {
  return static_cast<int>(std::lround(azimuth_deg * 10.0));
}

std::string_view SideName(SpeakerSide side) {
  return side == SpeakerSide::kLeft ? "left" : "right";
}

std::string AzimuthKey(double azimuth_deg) {
  // Shortest representation that survives a round trip, e.g. "22.5", "-30".
  Json j = azimuth_deg;
  std::string s = j.dump();
  if (s.size() > 2 && s.substr(s.size() - 2) == ".0") s.resize(s.size() - 2);
  return s;
}

absl::StatusOr<std::vector<double>> ReadMonoIr(
    const std::filesystem::path& path, int* sample_rate_hz) {
  auto audio = ReadWav(path);
  if (!audio.ok()) return audio.status();
  if (audio->num_channels() != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("HRIR ", path.string(), " is not mono"));
  }
  if (*sample_rate_hz == 0) *sample_rate_hz = audio->sample_rate_hz();
  if (audio->sample_rate_hz() != *sample_rate_hz) {
    return absl::InvalidArgumentError(
        absl::StrCat("HRIR ", path.string(), " has sample rate ",
                     audio->sample_rate_hz(), ", expected ", *sample_rate_hz));
  }
  auto ch = audio->channel(0);
  return std::vector<double>(ch.begin(), ch.end());
}

}  // namespace

absl::StatusOr<HrirSet> HrirSet::Create(std::string subject_id,
                                        int sample_rate_hz,
                                        std::vector<Entry> entries) {
  if (sample_rate_hz <= 0) {
    return absl::InvalidArgumentError("HRIR sample rate must be positive");
  }
  if (entries.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("HRIR subject ", subject_id, " has no entries"));
  }
  HrirSet set;
  set.subject_id_ = std::move(subject_id);
  set.sample_rate_hz_ = sample_rate_hz;
  size_t min_len = std::numeric_limits<size_t>::max();
  size_t max_len = 0;
  for (Entry& e : entries) {
    if (e.irs.to_left_mic.empty() || e.irs.to_right_mic.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("HRIR subject ", set.subject_id_, " azimuth ",
                       e.azimuth_deg, " has an empty response"));
    }
    for (const auto* ir : {&e.irs.to_left_mic, &e.irs.to_right_mic}) {
      for (double v : *ir) {
        if (!std::isfinite(v)) {
          return absl::InvalidArgumentError(
              absl::StrCat("HRIR subject ", set.subject_id_,
                           " contains a non-finite sample"));
        }
      }
    }
    min_len = std::min(
        {min_len, e.irs.to_left_mic.size(), e.irs.to_right_mic.size()});
    max_len = std::max(
        {max_len, e.irs.to_left_mic.size(), e.irs.to_right_mic.size()});
    const Key key{e.side, DeciDegrees(e.azimuth_deg)};
    if (!set.entries_.emplace(key, std::move(e.irs)).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("HRIR subject ", set.subject_id_,
                       " lists an azimuth twice: ", e.azimuth_deg));
    }
  }
  if (max_len > 2 * min_len) {
    return absl::InvalidArgumentError(absl::StrCat(
        "HRIR subject ", set.subject_id_, " mixes response lengths ", min_len,
        " and ", max_len, " (more than a factor of two apart)"));
  }
  std::set<int> left_mags;
  std::set<int> right_mags;
  for (const auto& [key, unused] : set.entries_) {
    (key.first == SpeakerSide::kLeft ? left_mags : right_mags)
        .insert(std::abs(key.second));
  }
  if (left_mags != right_mags) {
    return absl::InvalidArgumentError(
        absl::StrCat("HRIR subject ", set.subject_id_,
                     " does not cover the same azimuths for both speakers"));
  }
  return set;
}

const HrirPair* HrirSet::Find(SpeakerSide side, double azimuth_deg) const {
  auto it = entries_.find({side, DeciDegrees(azimuth_deg)});
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<double> HrirSet::Azimuths(SpeakerSide side) const {
  std::vector<double> out;
  for (const auto& [key, unused] : entries_) {
    if (key.first == side) out.push_back(key.second / 10.0);
  }
  return out;
}

absl::StatusOr<AudioBuffer> RenderAtEars(const AudioBuffer& program,
                                         const HrirSet& hrirs,
                                         double angle_left_deg,
                                         double angle_right_deg) {
  if (program.num_channels() != 2) {
    return absl::InvalidArgumentError("HRTF rendering needs a stereo program");
  }
  if (program.sample_rate_hz() != hrirs.sample_rate_hz()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "program is ", program.sample_rate_hz(), " Hz but HRIR subject ",
        hrirs.subject_id(), " is ", hrirs.sample_rate_hz(), " Hz"));
  }
  const HrirPair* left = hrirs.Find(SpeakerSide::kLeft, angle_left_deg);
  const HrirPair* right = hrirs.Find(SpeakerSide::kRight, angle_right_deg);
  if (left == nullptr || right == nullptr) {
    const SpeakerSide side =
        left == nullptr ? SpeakerSide::kLeft : SpeakerSide::kRight;
    return absl::NotFoundError(absl::StrCat(
        "HRIR subject ", hrirs.subject_id(), " lacks ",
        std::string(SideName(side)), " speaker azimuth ",
        left == nullptr ? angle_left_deg : angle_right_deg,
        "; available: ", absl::StrJoin(hrirs.Azimuths(side), ", ")));
  }
  const size_t n = program.num_frames();
  auto mix = [&](const std::vector<double>& from_left,
                 const std::vector<double>& from_right) {
    std::vector<double> a = ConvolveSignals(program.channel(0), from_left);
    std::vector<double> b = ConvolveSignals(program.channel(1), from_right);
    std::vector<double> out(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      if (i < a.size()) out[i] += a[i];
      if (i < b.size()) out[i] += b[i];
    }
    return out;
  };
  return AudioBuffer::Create(program.sample_rate_hz(),
                             {mix(left->to_left_mic, right->to_left_mic),
                              mix(left->to_right_mic, right->to_right_mic)});
}

absl::StatusOr<std::vector<HrirSet>> LoadHrirIndex(
    const std::filesystem::path& index_path) {
  auto text = ReadTextFile(index_path);
  if (!text.ok()) return text.status();
  Json root = Json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded() || !root.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat(index_path.string(), " is not a JSON object"));
  }
  const std::filesystem::path base = index_path.parent_path();
  std::vector<HrirSet> sets;
  for (const auto& [subject, body] : root.items()) {
    if (!body.is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat("HRIR subject ", subject, " is not an object"));
    }
    int fs = body.value("sample_rate_hz", 0);
    std::vector<HrirSet::Entry> entries;
    for (SpeakerSide side : {SpeakerSide::kLeft, SpeakerSide::kRight}) {
      const std::string side_name(SideName(side));
      if (!body.contains(side_name) || !body[side_name].is_object()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "HRIR subject ", subject, " lacks the '", side_name, "' speaker"));
      }
      for (const auto& [az, mics] : body[side_name].items()) {
        char* end = nullptr;
        const double azimuth = std::strtod(az.c_str(), &end);
        if (end == az.c_str() || *end != '\0' || !mics.is_object() ||
            !mics.contains("left_mic") || !mics.contains("right_mic") ||
            !mics["left_mic"].is_string() || !mics["right_mic"].is_string()) {
          return absl::InvalidArgumentError(
              absl::StrCat("HRIR subject ", subject, " has a malformed entry ",
                           side_name, "/", az));
        }
        HrirSet::Entry e{side, azimuth, {}};
        auto l = ReadMonoIr(base / mics["left_mic"].get<std::string>(), &fs);
        if (!l.ok()) return l.status();
        auto r = ReadMonoIr(base / mics["right_mic"].get<std::string>(), &fs);
        if (!r.ok()) return r.status();
        e.irs.to_left_mic = std::move(*l);
        e.irs.to_right_mic = std::move(*r);
        entries.push_back(std::move(e));
      }
    }
    auto set = HrirSet::Create(subject, fs, std::move(entries));
    if (!set.ok()) return set.status();
    sets.push_back(std::move(*set));
  }
  if (sets.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat(index_path.string(), " lists no HRIR subjects"));
  }
  return sets;
}

absl::Status WriteHrirIndex(const std::filesystem::path& dir,
                            std::span<const HrirSet> sets) {
  Json root = Json::object();
  for (const HrirSet& set : sets) {
    Json body = Json::object();
    body["sample_rate_hz"] = set.sample_rate_hz();
    for (SpeakerSide side : {SpeakerSide::kLeft, SpeakerSide::kRight}) {
      const std::string side_name(SideName(side));
      Json by_az = Json::object();
      for (double az : set.Azimuths(side)) {
        const HrirPair* pair = set.Find(side, az);
        const std::string key = AzimuthKey(az);
        Json mics = Json::object();
        for (int mic = 0; mic < 2; ++mic) {
          const std::string mic_name = mic == 0 ? "left_mic" : "right_mic";
          const std::string rel = absl::StrCat(set.subject_id(), "/", side_name,
                                               "_", key, "_", mic_name, ".wav");
          const auto& ir = mic == 0 ? pair->to_left_mic : pair->to_right_mic;
          auto buf = AudioBuffer::Create(set.sample_rate_hz(), {ir});
          if (!buf.ok()) return buf.status();
          absl::Status st = WriteWav(dir / rel, *buf, SampleFormat::kFloat32);
          if (!st.ok()) return st;
          mics[mic_name] = rel;
        }
        by_az[key] = std::move(mics);
      }
      body[side_name] = std::move(by_az);
    }
    root[set.subject_id()] = std::move(body);
  }
  return WriteTextFile(dir / "index.json", root.dump(2) + "\n");
}

const HrirSet* FindHrirSet(std::span<const HrirSet> sets,
                           std::string_view subject_id) {
  for (const HrirSet& s : sets) {
    if (s.subject_id() == subject_id) return &s;
  }
  return nullptr;
}

}  // namespace cadenza
