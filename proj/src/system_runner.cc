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

#include "cadenza/system_runner.h"

#include <system_error>

#include "absl/strings/str_cat.h"
#include "cadenza/parallel.h"
#include "cadenza/wav_io.h"

namespace cadenza {
namespace {

absl::StatusOr<StemSet> StemsAtListenerPosition(const SceneDataset& dataset,
                                                const SceneSpec& scene) {
  auto stems = dataset.LoadStems(scene.scene_id);
  if (!stems.ok()) return stems.status();
  if (!scene.hrtf_subject.has_value()) return stems;
  std::array<AudioBuffer, 4> rendered;
  for (Stem s : kAllStems) {
    auto r = PresentToListenerPosition(stems->stem(s), scene, dataset.hrirs());
    if (!r.ok()) return r.status();
    rendered[static_cast<size_t>(s)] = *std::move(r);
  }
  return StemSet::Create(std::move(rendered));
}

absl::Status RunScene(const SceneDataset& dataset, const SceneSpec& scene,
                      const SystemSpec& system,
                      const std::filesystem::path& out_dir,
                      const std::string& pattern) {
  auto mixture = dataset.LoadMixture(scene.scene_id);
  if (!mixture.ok()) return mixture.status();
  std::unique_ptr<Separator> separator;
  if (system.kind == SystemKind::kOracle) {
    auto stems = StemsAtListenerPosition(dataset, scene);
    if (!stems.ok()) return stems.status();
    separator = std::make_unique<OracleSeparator>(*std::move(stems));
  } else if (system.kind == SystemKind::kExternalStems) {
    separator = std::make_unique<ExternalStemsSeparator>(
        system.stems_dir, scene.scene_id, system.declared_lookahead_ms);
  }
  EnhancerConfig config = system.enhancer;
  config.passthrough = system.kind == SystemKind::kPassthrough;
  for (const std::string& listener_id : scene.listener_ids) {
    const Listener* listener = dataset.FindListenerById(listener_id);
    auto out = RunEnhancer(config, scene, *mixture, *listener, separator.get());
    if (!out.ok()) return out.status();
    const ScenePair pair{scene.scene_id, listener_id};
    absl::Status written = WriteWav(out_dir / RemixFileName(pattern, pair),
                                    out->remix, config.output_format);
    if (!written.ok()) return written;
    if (out->stems.has_value()) {
      for (Stem s : kAllStems) {
        written = WriteWav(out_dir / StemFileName(pair, s),
                           (*out->stems)[static_cast<size_t>(s)],
                           config.output_format);
        if (!written.ok()) return written;
      }
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<SystemSpec> ParseSystem(std::string_view text,
                                       std::string system_id) {
  SystemSpec spec;
  spec.system_id = std::move(system_id);
  if (text == "oracle") {
    spec.kind = SystemKind::kOracle;
  } else if (text == "passthrough") {
    spec.kind = SystemKind::kPassthrough;
  } else if (text.starts_with("stems:") && text.size() > 6) {
    spec.kind = SystemKind::kExternalStems;
    spec.stems_dir = std::string(text.substr(6));
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown system '", std::string(text),
                     "'; expected oracle, passthrough or stems:<dir>"));
  }
  if (spec.system_id.empty()) {
    spec.system_id = std::string(text.substr(0, text.find(':')));
  }
  return spec;
}

absl::StatusOr<SubmissionManifest> RunSystem(
    const SceneDataset& dataset, const SystemSpec& system,
    const std::filesystem::path& out_dir, int jobs) {
  absl::Status valid = ValidateEnhancerConfig(system.enhancer);
  if (!valid.ok()) return valid;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create ", out_dir.string(), ": ", ec.message()));
  }
  SubmissionManifest manifest;
  manifest.system_id = system.system_id;
  manifest.mode = dataset.mode();
  manifest.expected_pairs = dataset.NumPairs();
  manifest.declared_lookahead_ms = system.kind == SystemKind::kExternalStems
                                       ? system.declared_lookahead_ms
                                       : 0.0;

  const auto& scenes = dataset.scenes();
  std::vector<absl::Status> results(scenes.size());
  ParallelFor(scenes.size(), jobs, [&](size_t i) {
    results[i] =
        RunScene(dataset, scenes[i], system, out_dir, manifest.naming_pattern);
  });
  for (size_t i = 0; i < scenes.size(); ++i) {
    if (!results[i].ok()) {
      return absl::Status(results[i].code(),
                          absl::StrCat("scene ", scenes[i].scene_id, ": ",
                                       results[i].message()));
    }
  }
  absl::Status saved = SaveManifest(out_dir, manifest);
  if (!saved.ok()) return saved;
  return manifest;
}

}  // namespace cadenza
