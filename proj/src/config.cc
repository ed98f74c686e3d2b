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

#include "cadenza/config.h"

#include <initializer_list>
#include <set>

#include "absl/strings/str_cat.h"
#include "cadenza/file_util.h"
#include "toml.hpp"

namespace cadenza {
namespace {

absl::Status CheckKeys(const toml::table& table, std::string_view where,
                       std::initializer_list<std::string_view> allowed) {
  const std::set<std::string_view> known(allowed);
  for (const auto& [key, node] : table) {
    if (!known.contains(key.str())) {
      return absl::InvalidArgumentError(
          absl::StrCat("config: unknown key '", std::string(key.str()), "' in ",
                       std::string(where)));
    }
  }
  return absl::OkStatus();
}

// Reads `key` into `out` when present; a value of the wrong type is an
// error.
template <typename T>
absl::Status Read(const toml::table& table, std::string_view where,
                  std::string_view key, T& out) {
  const toml::node* node = table.get(key);
  if (node == nullptr) return absl::OkStatus();
  std::optional<T> value;
  if constexpr (std::is_same_v<T, double>) {
    // Integers are accepted where reals are expected.
    value = node->value<double>();
  } else {
    value = node->value_exact<T>();
  }
  if (!value.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("config: ", std::string(where), ".", std::string(key),
                     " has the wrong type"));
  }
  out = *value;
  return absl::OkStatus();
}

template <typename T>
absl::Status ReadInt(const toml::table& table, std::string_view where,
                     std::string_view key, T& out) {
  int64_t v = static_cast<int64_t>(out);
  absl::Status st = Read(table, where, key, v);
  if (!st.ok()) return st;
  out = static_cast<T>(v);
  return absl::OkStatus();
}

absl::Status ParseScenes(const toml::table& t, SceneDatasetOptions& out) {
  absl::Status st = CheckKeys(t, "[scenes]",
                              {"mode", "scenes_per_track",
                               "listeners_per_scene", "silence_floor_dbfs"});
  if (!st.ok()) return st;
  std::string mode(ChallengeModeName(out.mode));
  if (st = Read(t, "scenes", "mode", mode); !st.ok()) return st;
  auto parsed = ParseChallengeMode(mode);
  if (!parsed.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("config: unknown scenes.mode '", mode, "'"));
  }
  out.mode = *parsed;
  if (st = ReadInt(t, "scenes", "scenes_per_track", out.scenes_per_track);
      !st.ok()) {
    return st;
  }
  if (st = ReadInt(t, "scenes", "listeners_per_scene", out.listeners_per_scene);
      !st.ok()) {
    return st;
  }
  return Read(t, "scenes", "silence_floor_dbfs", out.silence_floor_dbfs);
}

absl::Status ParseEnhancer(const toml::table& t, EnhancerConfig& out) {
  absl::Status st =
      CheckKeys(t, "[enhancer]",
                {"apply_gains", "amplification", "normalize_target",
                 "output_format", "nalr_taps", "emit_stems"});
  if (!st.ok()) return st;
  if (st = Read(t, "enhancer", "apply_gains", out.apply_gains); !st.ok()) {
    return st;
  }
  std::string amp = out.amplification == Amplification::kNalr ? "nalr" : "none";
  if (st = Read(t, "enhancer", "amplification", amp); !st.ok()) return st;
  if (amp == "nalr") {
    out.amplification = Amplification::kNalr;
  } else if (amp == "none") {
    out.amplification = Amplification::kNone;
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "config: enhancer.amplification must be nalr or none, got '", amp,
        "'"));
  }
  if (st = Read(t, "enhancer", "normalize_target", out.normalize_target);
      !st.ok()) {
    return st;
  }
  std::string format(SampleFormatName(out.output_format));
  if (st = Read(t, "enhancer", "output_format", format); !st.ok()) return st;
  auto parsed = ParseSampleFormat(format);
  if (!parsed.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("config: unknown enhancer.output_format '", format, "'"));
  }
  out.output_format = *parsed;
  if (st = ReadInt(t, "enhancer", "nalr_taps", out.nalr_taps); !st.ok()) {
    return st;
  }
  if (st = Read(t, "enhancer", "emit_stems", out.emit_stems); !st.ok()) {
    return st;
  }
  return ValidateEnhancerConfig(out);
}

absl::Status ParseMetric(const toml::table& t, HarnessConfig& out) {
  absl::Status st = CheckKeys(
      t, "[metric]", {"backend", "command", "timeout_s", "max_parallel"});
  if (!st.ok()) return st;
  std::string backend = "builtin";
  if (st = Read(t, "metric", "backend", backend); !st.ok()) return st;
  if (backend == "builtin") {
    out.metric = MetricKind::kBuiltin;
  } else if (backend == "external") {
    out.metric = MetricKind::kExternal;
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "config: metric.backend must be builtin or external, got '", backend,
        "'"));
  }
  if (const toml::node* cmd = t.get("command")) {
    const toml::array* arr = cmd->as_array();
    if (arr == nullptr) {
      return absl::InvalidArgumentError(
          "config: metric.command must be an array of strings");
    }
    out.external_metric.argv.clear();
    for (const toml::node& item : *arr) {
      auto s = item.value_exact<std::string>();
      if (!s.has_value()) {
        return absl::InvalidArgumentError(
            "config: metric.command must be an array of strings");
      }
      out.external_metric.argv.push_back(*s);
    }
  }
  if (st = Read(t, "metric", "timeout_s", out.external_metric.timeout_s);
      !st.ok()) {
    return st;
  }
  if (st = ReadInt(t, "metric", "max_parallel",
                   out.external_metric.max_parallel);
      !st.ok()) {
    return st;
  }
  if (out.metric == MetricKind::kExternal && out.external_metric.argv.empty()) {
    return absl::InvalidArgumentError(
        "config: metric.backend = external needs metric.command");
  }
  return absl::OkStatus();
}

absl::Status ParseProbe(const toml::table& t, CausalityProbeOptions& out) {
  absl::Status st = CheckKeys(
      t, "[probe]",
      {"bound_ms", "num_probes", "signal_s", "tolerance", "max_lookahead_ms"});
  if (!st.ok()) return st;
  if (st = Read(t, "probe", "bound_ms", out.bound_ms); !st.ok()) return st;
  if (st = ReadInt(t, "probe", "num_probes", out.num_probes); !st.ok()) {
    return st;
  }
  if (st = Read(t, "probe", "signal_s", out.signal_s); !st.ok()) return st;
  if (st = Read(t, "probe", "tolerance", out.tolerance); !st.ok()) return st;
  return Read(t, "probe", "max_lookahead_ms", out.max_lookahead_ms);
}

}  // namespace

absl::StatusOr<HarnessConfig> ParseConfig(std::string_view toml_text) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("config: ", std::string(e.description()), " at line ",
                     e.source().begin.line));
  }
  absl::Status st = CheckKeys(
      root, "the top level",
      {"seed", "jobs", "data_root", "scenes", "enhancer", "metric", "probe"});
  if (!st.ok()) return st;

  HarnessConfig config;
  if (root.contains("seed")) {
    int64_t seed = 0;
    if (st = Read(root, "", "seed", seed); !st.ok()) return st;
    if (seed < 0) {
      return absl::InvalidArgumentError("config: seed must be >= 0");
    }
    config.seed = static_cast<uint64_t>(seed);
  }
  if (root.contains("jobs")) {
    int64_t jobs = 0;
    if (st = Read(root, "", "jobs", jobs); !st.ok()) return st;
    config.jobs = static_cast<int>(jobs);
  }
  if (root.contains("data_root")) {
    std::string dir;
    if (st = Read(root, "", "data_root", dir); !st.ok()) return st;
    config.data_root = dir;
  }

  auto section =
      [&](std::string_view name) -> absl::StatusOr<const toml::table*> {
    const toml::node* node = root.get(name);
    if (node == nullptr) return nullptr;
    if (!node->is_table()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config: ", std::string(name), " must be a table"));
    }
    return node->as_table();
  };
  auto scenes = section("scenes");
  if (!scenes.ok()) return scenes.status();
  if (*scenes != nullptr) {
    if (st = ParseScenes(**scenes, config.scenes); !st.ok()) return st;
  }
  auto enhancer = section("enhancer");
  if (!enhancer.ok()) return enhancer.status();
  if (*enhancer != nullptr) {
    if (st = ParseEnhancer(**enhancer, config.enhancer); !st.ok()) return st;
  }
  auto metric = section("metric");
  if (!metric.ok()) return metric.status();
  if (*metric != nullptr) {
    if (st = ParseMetric(**metric, config); !st.ok()) return st;
  }
  auto probe = section("probe");
  if (!probe.ok()) return probe.status();
  if (*probe != nullptr) {
    if (st = ParseProbe(**probe, config.probe); !st.ok()) return st;
  }
  return config;
}

absl::StatusOr<HarnessConfig> LoadConfig(const std::filesystem::path& path) {
  auto text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  auto config = ParseConfig(*text);
  if (!config.ok()) {
    return absl::Status(
        config.status().code(),
        absl::StrCat(path.string(), ": ", config.status().message()));
  }
  return config;
}

}  // namespace cadenza
