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

#include "cadenza/evaluation.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <system_error>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "cadenza/file_util.h"
#include "cadenza/parallel.h"
#include "cadenza/wav_io.h"
#include "glog/logging.h"

namespace cadenza {
namespace {

absl::string_view AsAbsl(std::string_view s) { return {s.data(), s.size()}; }

std::string FormatDouble(double v) { return absl::StrFormat("%.17g", v); }

std::string FormatOptional(const std::optional<double>& v) {
  return v.has_value() ? FormatDouble(*v) : "";
}

absl::StatusOr<std::optional<double>> ParseOptional(absl::string_view field,
                                                    size_t line) {
  if (field.empty()) return std::optional<double>();
  double v;
  if (!absl::SimpleAtod(field, &v)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "records line ", line, ": bad number '", std::string(field), "'"));
  }
  return std::optional<double>(v);
}

bool IsValidStatus(std::string_view s) {
  return s == kStatusOk || s == kStatusMissing || s == kStatusUnreadable ||
         s == kStatusScoreError || s == kStatusStemsError;
}

}  // namespace

std::string RecordsToCsv(std::span<const EvaluationRecord> records) {
  std::string out = absl::StrCat(std::string(kRecordsCsvHeader), "\n");
  for (const EvaluationRecord& r : records) {
    absl::StrAppend(&out, r.system_id, ",", r.scene_id, ",", r.listener_id, ",",
                    FormatOptional(r.remix_score), ",",
                    FormatOptional(r.vdbo_score), ",", r.severity_code, ",",
                    FormatDouble(r.gain_spread_db), ",", r.status, "\n");
  }
  return out;
}

absl::StatusOr<std::vector<EvaluationRecord>> ParseRecordsCsv(
    std::string_view text) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(AsAbsl(text), '\n', absl::SkipEmpty());
  if (lines.empty() ||
      absl::StripSuffix(lines[0], "\r") != AsAbsl(kRecordsCsvHeader)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "records header must be '", std::string(kRecordsCsvHeader), "'"));
  }
  std::vector<EvaluationRecord> records;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<absl::string_view> f =
        absl::StrSplit(absl::StripSuffix(lines[i], "\r"), ',');
    if (f.size() != 8) {
      return absl::InvalidArgumentError(absl::StrCat(
          "records line ", i + 1, ": expected 8 fields, got ", f.size()));
    }
    EvaluationRecord r;
    r.system_id = std::string(f[0]);
    r.scene_id = std::string(f[1]);
    r.listener_id = std::string(f[2]);
    auto remix = ParseOptional(f[3], i + 1);
    if (!remix.ok()) return remix.status();
    auto vdbo = ParseOptional(f[4], i + 1);
    if (!vdbo.ok()) return vdbo.status();
    r.remix_score = *remix;
    r.vdbo_score = *vdbo;
    if (!absl::SimpleAtoi(f[5], &r.severity_code) ||
        !absl::SimpleAtod(f[6], &r.gain_spread_db)) {
      return absl::InvalidArgumentError(
          absl::StrCat("records line ", i + 1, ": bad severity or spread"));
    }
    r.status = std::string(f[7]);
    if (!IsValidStatus(r.status)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "records line ", i + 1, ": unknown status '", r.status, "'"));
    }
    records.push_back(std::move(r));
  }
  return records;
}

absl::StatusOr<std::vector<EvaluationRecord>> LoadRecordsCsv(
    const std::filesystem::path& path) {
  auto text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  auto records = ParseRecordsCsv(*text);
  if (!records.ok()) {
    return absl::Status(
        records.status().code(),
        absl::StrCat(path.string(), ": ", records.status().message()));
  }
  return records;
}

absl::StatusOr<EvaluationRun> EvaluateSubmission(
    const std::filesystem::path& submission_dir, const SceneDataset& dataset,
    const MetricBackend& backend, const EvaluateOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  auto manifest = LoadManifest(submission_dir);
  if (!manifest.ok()) return manifest.status();
  auto validation = ValidateSubmission(submission_dir, *manifest, dataset);
  if (!validation.ok()) return validation.status();
  if (!validation->pass && !options.force) {
    return absl::FailedPreconditionError(absl::StrCat(
        "submission ", submission_dir.string(), " failed validation (",
        validation->missing.size(), " missing, ", validation->extra.size(),
        " extra, ", validation->format_errors.size(),
        " format errors); rerun with force to score it anyway"));
  }

  // Every scene's reference stems must resolve before any scoring.
  std::vector<std::string> unresolved;
  for (const SceneSpec& scene : dataset.scenes()) {
    for (Stem s : kAllStems) {
      std::error_code ec;
      const auto path = dataset.SceneDir(scene.scene_id) /
                        absl::StrCat(std::string(StemName(s)), ".wav");
      if (!std::filesystem::is_regular_file(path, ec)) {
        unresolved.push_back(path.string());
      }
    }
  }
  if (!unresolved.empty()) {
    return absl::NotFoundError(absl::StrCat("reference stems missing: ",
                                            absl::StrJoin(unresolved, ", ")));
  }

  EvaluationRun run;
  run.system_id = manifest->system_id;
  run.validation = *std::move(validation);

  const std::vector<SceneSpec>& scenes = dataset.scenes();
  std::vector<std::vector<EvaluationRecord>> per_scene(scenes.size());
  std::atomic<size_t> done{0};
  std::atomic<size_t> failures{0};
  const size_t log_every = std::max<size_t>(1, scenes.size() / 10);

  ParallelFor(scenes.size(), options.jobs, [&](size_t index) {
    const SceneSpec& scene = scenes[index];
    std::vector<EvaluationRecord>& rows = per_scene[index];
    // Stem references are only built when some listener's stems are in.
    bool any_stems = false;
    if (options.score_stems) {
      for (const std::string& listener_id : scene.listener_ids) {
        std::error_code ec;
        any_stems =
            any_stems ||
            std::filesystem::exists(
                submission_dir /
                    StemFileName({scene.scene_id, listener_id}, Stem::kVocals),
                ec);
      }
    }
    absl::StatusOr<ReferenceBundle> presented = [&] {
      auto true_stems = dataset.LoadStems(scene.scene_id);
      if (!true_stems.ok()) {
        return absl::StatusOr<ReferenceBundle>(true_stems.status());
      }
      return PresentReference(scene, *true_stems, dataset.hrirs(), any_stems);
    }();
    for (const std::string& listener_id : scene.listener_ids) {
      const Listener* listener = dataset.FindListenerById(listener_id);
      const ScenePair pair{scene.scene_id, listener_id};
      EvaluationRecord r;
      r.system_id = manifest->system_id;
      r.scene_id = scene.scene_id;
      r.listener_id = listener_id;
      r.severity_code = SeverityCode(MeanEarSeverity(*listener));
      r.gain_spread_db = scene.gains.SpreadDb();

      const auto remix_path =
          submission_dir / RemixFileName(manifest->naming_pattern, pair);
      std::error_code ec;
      if (!std::filesystem::is_regular_file(remix_path, ec)) {
        r.status = std::string(kStatusMissing);
        rows.push_back(std::move(r));
        continue;
      }
      auto processed =
          ReadWavExpecting(remix_path, dataset.sample_rate_hz(), 2);
      if (!processed.ok()) {
        LOG(WARNING) << remix_path.string() << ": "
                     << processed.status().message();
        r.status = std::string(kStatusUnreadable);
        rows.push_back(std::move(r));
        continue;
      }
      absl::StatusOr<ReferenceBundle> reference =
          presented.ok()
              ? AmplifyReference(*presented, *listener, options.nalr_taps)
              : presented;
      absl::StatusOr<double> score =
          reference.ok()
              ? ScoreRemix(*processed, *reference, *listener, backend)
              : absl::StatusOr<double>(reference.status());
      if (!score.ok()) {
        LOG(WARNING) << scene.scene_id << "/" << listener_id << ": "
                     << score.status().message();
        r.status = std::string(kStatusScoreError);
        rows.push_back(std::move(r));
        continue;
      }
      r.remix_score = *score;
      r.status = std::string(kStatusOk);

      if (options.score_stems) {
        std::array<AudioBuffer, 4> stems;
        int found = 0;
        absl::Status stem_status;
        for (Stem s : kAllStems) {
          const auto path = submission_dir / StemFileName(pair, s);
          if (!std::filesystem::is_regular_file(path, ec)) continue;
          ++found;
          auto audio = ReadWavExpecting(path, dataset.sample_rate_hz(), 2);
          if (!audio.ok()) {
            stem_status = audio.status();
            continue;
          }
          stems[static_cast<size_t>(s)] = *std::move(audio);
        }
        if (found == 4 && stem_status.ok()) {
          auto vdbo = ScoreVdbo(stems, *reference, *listener, backend);
          if (vdbo.ok()) {
            r.vdbo_score = *vdbo;
          } else {
            stem_status = vdbo.status();
          }
        } else if (found != 0 && stem_status.ok()) {
          stem_status = absl::NotFoundError(
              absl::StrCat("only ", found, " of 4 stems submitted"));
        }
        if (!stem_status.ok()) {
          LOG(WARNING) << scene.scene_id << "/" << listener_id
                       << " stems: " << stem_status.message();
          r.status = std::string(kStatusStemsError);
        }
      }
      rows.push_back(std::move(r));
    }
    for (const EvaluationRecord& row : rows) {
      if (row.status != kStatusOk) failures.fetch_add(1);
    }
    const size_t finished = done.fetch_add(1) + 1;
    if (finished % log_every == 0 || finished == scenes.size()) {
      LOG(INFO) << run.system_id << ": scored " << finished << "/"
                << scenes.size() << " scenes";
    }
  });

  for (auto& rows : per_scene) {
    for (auto& r : rows) run.records.push_back(std::move(r));
  }
  run.failures = failures.load();
  run.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  LOG(INFO) << run.system_id << ": " << run.records.size() << " pairs, "
            << run.failures << " failures, " << run.wall_time_s << " s";
  return run;
}

}  // namespace cadenza
