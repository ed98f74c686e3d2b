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

#include "cadenza/submission.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <system_error>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_replace.h"
#include "cadenza/file_util.h"
#include "json.hpp"

namespace cadenza {
namespace {

using Json = nlohmann::ordered_json;

std::string PairKey(const ScenePair& pair) {
  return absl::StrCat(pair.scene_id, "/", pair.listener_id);
}

double LargestCode(SampleFormat format) {
  switch (format) {
    case SampleFormat::kPcm16:
      return 32767.0 / 32768.0;
    case SampleFormat::kPcm24:
      return 8388607.0 / 8388608.0;
    case SampleFormat::kFloat32:
      return 1.0;
  }
  return 1.0;
}

}  // namespace

absl::Status ValidateManifest(const SubmissionManifest& manifest) {
  if (manifest.system_id.empty()) {
    return absl::InvalidArgumentError("manifest: system_id is empty");
  }
  if (manifest.expected_pairs == 0) {
    return absl::InvalidArgumentError("manifest: expected_pairs must be > 0");
  }
  const std::string& p = manifest.naming_pattern;
  if (!absl::StrContains(p, "{scene}") || !absl::StrContains(p, "{listener}") ||
      !absl::EndsWith(p, ".wav") || absl::StrContains(p, "/")) {
    return absl::InvalidArgumentError(absl::StrCat(
        "manifest: naming_pattern '", p,
        "' must be a flat .wav name containing {scene} and {listener}"));
  }
  if (std::isnan(manifest.declared_lookahead_ms) ||
      manifest.declared_lookahead_ms < 0.0) {
    return absl::InvalidArgumentError(
        "manifest: declared_lookahead_ms must be >= 0");
  }
  return absl::OkStatus();
}

std::string SerializeManifest(const SubmissionManifest& manifest) {
  Json j;
  j["system_id"] = manifest.system_id;
  j["mode"] = std::string(ChallengeModeName(manifest.mode));
  j["expected_pairs"] = manifest.expected_pairs;
  j["naming_pattern"] = manifest.naming_pattern;
  if (std::isinf(manifest.declared_lookahead_ms)) {
    j["declared_lookahead_ms"] = nullptr;
  } else {
    j["declared_lookahead_ms"] = manifest.declared_lookahead_ms;
  }
  return j.dump(2) + "\n";
}

absl::StatusOr<SubmissionManifest> ParseManifest(std::string_view json_text) {
  Json j = Json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("manifest is not a JSON object");
  }
  SubmissionManifest m;
  try {
    m.system_id = j.at("system_id").get<std::string>();
    const std::string mode = j.at("mode").get<std::string>();
    auto parsed = ParseChallengeMode(mode);
    if (!parsed.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("manifest: unknown mode '", mode, "'"));
    }
    m.mode = *parsed;
    const Json& pairs = j.at("expected_pairs");
    if (!pairs.is_number_integer() || pairs.get<long long>() <= 0) {
      return absl::InvalidArgumentError(
          "manifest: expected_pairs must be a positive integer");
    }
    m.expected_pairs = pairs.get<size_t>();
    if (j.contains("naming_pattern")) {
      m.naming_pattern = j["naming_pattern"].get<std::string>();
    }
    const Json& la = j.at("declared_lookahead_ms");
    m.declared_lookahead_ms = la.is_null()
                                  ? std::numeric_limits<double>::infinity()
                                  : la.get<double>();
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("manifest: ", e.what()));
  }
  absl::Status valid = ValidateManifest(m);
  if (!valid.ok()) return valid;
  return m;
}

absl::StatusOr<SubmissionManifest> LoadManifest(
    const std::filesystem::path& submission_dir) {
  auto text = ReadTextFile(submission_dir / kSubmissionManifestName);
  if (!text.ok()) return text.status();
  return ParseManifest(*text);
}

absl::Status SaveManifest(const std::filesystem::path& submission_dir,
                          const SubmissionManifest& manifest) {
  absl::Status valid = ValidateManifest(manifest);
  if (!valid.ok()) return valid;
  return WriteTextFile(submission_dir / kSubmissionManifestName,
                       SerializeManifest(manifest));
}

std::vector<ScenePair> ExpectedPairs(const SceneDataset& dataset) {
  std::vector<ScenePair> pairs;
  pairs.reserve(dataset.NumPairs());
  for (const SceneSpec& scene : dataset.scenes()) {
    for (const std::string& l : scene.listener_ids) {
      pairs.push_back({scene.scene_id, l});
    }
  }
  return pairs;
}

std::string RemixFileName(std::string_view pattern, const ScenePair& pair) {
  return absl::StrReplaceAll(
      std::string(pattern),
      {{"{scene}", pair.scene_id}, {"{listener}", pair.listener_id}});
}

std::string StemFileName(const ScenePair& pair, Stem stem) {
  return absl::StrCat(pair.scene_id, "_", pair.listener_id, "_",
                      std::string(StemName(stem)), ".wav");
}

size_t CountClippedSamples(const AudioBuffer& audio, SampleFormat format) {
  const double limit = LargestCode(format);
  size_t n = 0;
  for (int c = 0; c < audio.num_channels(); ++c) {
    for (double v : audio.channel(c)) {
      if (std::abs(v) >= limit) ++n;
    }
  }
  return n;
}

absl::StatusOr<ValidationReport> ValidateSubmission(
    const std::filesystem::path& submission_dir,
    const SubmissionManifest& manifest, const SceneDataset& dataset) {
  std::error_code ec;
  if (!std::filesystem::is_directory(submission_dir, ec)) {
    return absl::NotFoundError(absl::StrCat(
        "submission directory ", submission_dir.string(), " is not readable"));
  }
  std::set<std::string> present;
  for (const auto& entry :
       std::filesystem::directory_iterator(submission_dir, ec)) {
    if (entry.is_regular_file()) {
      present.insert(entry.path().filename().string());
    } else {
      present.insert(entry.path().filename().string() + "/");
    }
  }
  if (ec) {
    return absl::UnavailableError(absl::StrCat(
        "cannot list ", submission_dir.string(), ": ", ec.message()));
  }

  ValidationReport report;
  if (manifest.mode != dataset.mode()) {
    report.format_errors.push_back(
        {std::string(kSubmissionManifestName),
         absl::StrCat("mode ", std::string(ChallengeModeName(manifest.mode)),
                      " does not match the scene set's ",
                      std::string(ChallengeModeName(dataset.mode())))});
  }
  if (manifest.expected_pairs != dataset.NumPairs()) {
    report.format_errors.push_back(
        {std::string(kSubmissionManifestName),
         absl::StrCat("expected_pairs is ", manifest.expected_pairs,
                      " but the scene set has ", dataset.NumPairs())});
  }

  std::set<std::string> claimed = {std::string(kSubmissionManifestName)};
  auto check_audio = [&](const std::string& name, size_t expected_frames) {
    WavInfo info;
    auto audio = ReadWav(submission_dir / name, &info);
    if (!audio.ok()) {
      report.format_errors.push_back(
          {name, std::string(audio.status().message())});
      return;
    }
    report.clipping[name] = CountClippedSamples(*audio, info.format);
    if (info.sample_rate_hz != dataset.sample_rate_hz()) {
      report.format_errors.push_back(
          {name, absl::StrCat("sample rate ", info.sample_rate_hz,
                              " Hz, expected ", dataset.sample_rate_hz())});
    }
    if (info.num_channels != 2) {
      report.format_errors.push_back(
          {name, absl::StrCat(info.num_channels, " channels, expected 2")});
    }
    const size_t diff = info.num_frames > expected_frames
                            ? info.num_frames - expected_frames
                            : expected_frames - info.num_frames;
    if (diff > 1) {
      report.format_errors.push_back(
          {name, absl::StrCat(info.num_frames, " frames, expected ",
                              expected_frames, " +/- 1")});
    }
  };

  for (const ScenePair& pair : ExpectedPairs(dataset)) {
    const SceneSpec* scene = dataset.FindScene(pair.scene_id);
    const size_t frames = SegmentFrames(*scene, dataset.sample_rate_hz());
    const std::string remix = RemixFileName(manifest.naming_pattern, pair);
    if (present.contains(remix)) {
      claimed.insert(remix);
      check_audio(remix, frames);
    } else {
      report.missing.push_back(PairKey(pair));
    }
    int stems_found = 0;
    for (Stem s : kAllStems) {
      const std::string stem = StemFileName(pair, s);
      if (!present.contains(stem)) continue;
      ++stems_found;
      claimed.insert(stem);
      check_audio(stem, frames);
    }
    if (stems_found != 0 && stems_found != 4) {
      report.format_errors.push_back(
          {PairKey(pair),
           absl::StrCat("only ", stems_found, " of 4 stem files present")});
    }
  }
  for (const std::string& name : present) {
    if (!claimed.contains(name)) report.extra.push_back(name);
  }
  report.pass = report.missing.empty() && report.extra.empty() &&
                report.format_errors.empty();
  return report;
}

std::string ValidationReportToJson(const ValidationReport& report) {
  Json j;
  j["pass"] = report.pass;
  j["missing"] = report.missing;
  j["extra"] = report.extra;
  Json errors = Json::array();
  for (const FileIssue& e : report.format_errors) {
    errors.push_back({{"file", e.file}, {"message", e.message}});
  }
  j["format_errors"] = errors;
  Json clipping = Json::object();
  for (const auto& [name, count] : report.clipping) clipping[name] = count;
  j["clipping"] = clipping;
  return j.dump(2) + "\n";
}

}  // namespace cadenza
