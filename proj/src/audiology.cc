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

#include "cadenza/audiology.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "cadenza/file_util.h"
#include "json.hpp"

namespace cadenza {
namespace {

using OrderedJson = nlohmann::ordered_json;

constexpr std::array<size_t, 4> kFourFrequencyIndices = {1, 2, 3, 5};

absl::StatusOr<Audiogram::Levels> ParseLevels(const OrderedJson& record,
                                              const std::string& id,
                                              const char* key) {
  auto it = record.find(key);
  if (it == record.end() || !it->is_array()) {
    return absl::InvalidArgumentError(
        absl::StrCat("listener '", id, "': missing array '", key, "'"));
  }
  if (it->size() != kNumAudiometricFrequencies) {
    return absl::InvalidArgumentError(
        absl::StrCat("listener '", id, "': '", key, "' has ", it->size(),
                     " values, expected ", kNumAudiometricFrequencies));
  }
  Audiogram::Levels levels{};
  for (size_t i = 0; i < levels.size(); ++i) {
    if (!(*it)[i].is_number()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "listener '", id, "': '", key, "'[", i, "] is not a number"));
    }
    levels[i] = (*it)[i].get<double>();
  }
  return levels;
}

}  // namespace

absl::StatusOr<Audiogram> Audiogram::Create(const Levels& thresholds_db_hl) {
  for (size_t i = 0; i < thresholds_db_hl.size(); ++i) {
    const double t = thresholds_db_hl[i];
    if (!std::isfinite(t) || t < 0.0 || t > kMaxThresholdDbHl) {
      return absl::InvalidArgumentError(absl::StrCat(
          "threshold ", t, " dB HL at ", kAudiometricFrequenciesHz[i],
          " Hz is outside [0, ", kMaxThresholdDbHl, "]"));
    }
  }
  return Audiogram(thresholds_db_hl);
}

absl::StatusOr<Audiogram> Audiogram::CreateClamped(
    const Levels& thresholds_db_hl, std::vector<std::string>* warnings,
    std::string_view context) {
  Levels clamped = thresholds_db_hl;
  for (size_t i = 0; i < clamped.size(); ++i) {
    const double t = clamped[i];
    if (!std::isfinite(t)) {
      return absl::InvalidArgumentError(
          absl::StrCat(std::string(context), " non-finite threshold at ",
                       kAudiometricFrequenciesHz[i], " Hz"));
    }
    const double c = std::clamp(t, 0.0, kMaxThresholdDbHl);
    if (c != t) {
      if (warnings != nullptr) {
        warnings->push_back(
            absl::StrCat(std::string(context), " threshold ", t, " dB HL at ",
                         kAudiometricFrequenciesHz[i], " Hz clamped to ", c));
      }
      clamped[i] = c;
    }
  }
  return Audiogram(clamped);
}

Audiogram Audiogram::Flat(double level_db_hl) {
  Levels levels;
  levels.fill(std::clamp(level_db_hl, 0.0, kMaxThresholdDbHl));
  return Audiogram(levels);
}

absl::StatusOr<double> Audiogram::ThresholdAt(double frequency_hz) const {
  for (size_t i = 0; i < kAudiometricFrequenciesHz.size(); ++i) {
    if (kAudiometricFrequenciesHz[i] == frequency_hz) return thresholds_[i];
  }
  return absl::InvalidArgumentError(
      absl::StrCat(frequency_hz, " Hz is not an audiometric frequency"));
}

double Audiogram::InterpolatedThreshold(double frequency_hz) const {
  const auto& f = kAudiometricFrequenciesHz;
  if (frequency_hz <= f.front()) return thresholds_.front();
  if (frequency_hz >= f.back()) return thresholds_.back();
  size_t hi = 1;
  while (f[hi] < frequency_hz) ++hi;
  const double t =
      std::log(frequency_hz / f[hi - 1]) / std::log(f[hi] / f[hi - 1]);
  return thresholds_[hi - 1] + t * (thresholds_[hi] - thresholds_[hi - 1]);
}

std::string_view SeverityName(SeverityGrade grade) {
  switch (grade) {
    case SeverityGrade::kNoImpairment:
      return "no impairment";
    case SeverityGrade::kMild:
      return "mild";
    case SeverityGrade::kModerate:
      return "moderate";
    case SeverityGrade::kModeratelySevere:
      return "moderately severe";
    case SeverityGrade::kSevere:
      return "severe";
    case SeverityGrade::kProfound:
      return "profound";
  }
  return "unknown";
}

double FourFrequencyAverage(const Audiogram& audiogram) {
  double sum = 0.0;
  for (size_t i : kFourFrequencyIndices) sum += audiogram.thresholds_db_hl()[i];
  return sum / 4.0;
}

SeverityGrade ClassifySeverity(double four_frequency_average_db) {
  const double fa = std::max(0.0, four_frequency_average_db);
  if (fa < 20.0) return SeverityGrade::kNoImpairment;
  if (fa < 35.0) return SeverityGrade::kMild;
  if (fa < 50.0) return SeverityGrade::kModerate;
  if (fa < 65.0) return SeverityGrade::kModeratelySevere;
  if (fa < 80.0) return SeverityGrade::kSevere;
  return SeverityGrade::kProfound;
}

SeverityGrade BetterEarSeverity(const Listener& listener) {
  return ClassifySeverity(std::min(FourFrequencyAverage(listener.left),
                                   FourFrequencyAverage(listener.right)));
}

SeverityGrade MeanEarSeverity(const Listener& listener) {
  // The four-frequency average is linear, so averaging the ears first or
  // last gives the same number.
  double sum = 0.0;
  for (size_t i : kFourFrequencyIndices) {
    sum += 0.5 * (listener.left.thresholds_db_hl()[i] +
                  listener.right.thresholds_db_hl()[i]);
  }
  return ClassifySeverity(sum / 4.0);
}

absl::StatusOr<ListenerDataset> ParseListeners(std::string_view json_text) {
  ListenerDataset dataset;
  if (std::all_of(json_text.begin(), json_text.end(),
                  [](unsigned char c) { return std::isspace(c); })) {
    return dataset;
  }
  std::vector<std::string> duplicates;
  std::unordered_set<std::string> seen;
  OrderedJson root;
  try {
    root = OrderedJson::parse(
        json_text,
        [&](int depth, OrderedJson::parse_event_t event, OrderedJson& parsed) {
          if (depth == 1 && event == OrderedJson::parse_event_t::key) {
            const std::string key = parsed.get<std::string>();
            if (!seen.insert(key).second) duplicates.push_back(key);
          }
          return true;
        });
  } catch (const OrderedJson::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("listener manifest is not valid JSON: ", e.what()));
  }
  if (!duplicates.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("duplicate listener id '", duplicates.front(), "'"));
  }
  if (!root.is_object()) {
    return absl::InvalidArgumentError(
        "listener manifest must be a JSON object keyed by listener id");
  }
  for (const auto& [id, record] : root.items()) {
    if (id.empty()) {
      return absl::InvalidArgumentError("listener id must be non-empty");
    }
    if (!record.is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat("listener '", id, "': record is not an object"));
    }
    auto cfs = record.find("audiogram_cfs");
    if (cfs == record.end() || !cfs->is_array() ||
        cfs->size() != kNumAudiometricFrequencies) {
      return absl::InvalidArgumentError(
          absl::StrCat("listener '", id,
                       "': 'audiogram_cfs' must list the 8 standard "
                       "frequencies"));
    }
    for (size_t i = 0; i < kNumAudiometricFrequencies; ++i) {
      if (!(*cfs)[i].is_number() ||
          (*cfs)[i].get<double>() != kAudiometricFrequenciesHz[i]) {
        return absl::InvalidArgumentError(
            absl::StrCat("listener '", id, "': 'audiogram_cfs'[", i,
                         "] must be ", kAudiometricFrequenciesHz[i]));
      }
    }
    auto left = ParseLevels(record, id, "levels_l");
    if (!left.ok()) return left.status();
    auto right = ParseLevels(record, id, "levels_r");
    if (!right.ok()) return right.status();
    auto left_ag = Audiogram::CreateClamped(
        *left, &dataset.warnings, absl::StrCat("listener '", id, "' left:"));
    if (!left_ag.ok()) return left_ag.status();
    auto right_ag = Audiogram::CreateClamped(
        *right, &dataset.warnings, absl::StrCat("listener '", id, "' right:"));
    if (!right_ag.ok()) return right_ag.status();
    dataset.listeners.push_back(Listener{id, *left_ag, *right_ag});
  }
  return dataset;
}

absl::StatusOr<ListenerDataset> LoadListeners(
    const std::filesystem::path& path) {
  auto text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  auto parsed = ParseListeners(*text);
  if (!parsed.ok()) {
    return absl::Status(
        parsed.status().code(),
        absl::StrCat(path.string(), ": ", parsed.status().message()));
  }
  return parsed;
}

std::string SerializeListeners(std::span<const Listener> listeners) {
  OrderedJson root = OrderedJson::object();
  for (const Listener& l : listeners) {
    OrderedJson rec;
    rec["audiogram_cfs"] = kAudiometricFrequenciesHz;
    rec["levels_l"] = l.left.thresholds_db_hl();
    rec["levels_r"] = l.right.thresholds_db_hl();
    root[l.id] = std::move(rec);
  }
  return root.dump(2) + "\n";
}

absl::Status SaveListeners(const std::filesystem::path& path,
                           std::span<const Listener> listeners) {
  return WriteTextFile(path, SerializeListeners(listeners));
}

const Listener* FindListener(std::span<const Listener> listeners,
                             std::string_view id) {
  for (const Listener& l : listeners) {
    if (l.id == id) return &l;
  }
  return nullptr;
}

}  // namespace cadenza
