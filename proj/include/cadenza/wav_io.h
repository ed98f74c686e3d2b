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

#ifndef CADENZA_WAV_IO_H_
#define CADENZA_WAV_IO_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cadenza/audio_buffer.h"

namespace cadenza {

enum class SampleFormat {
  kPcm16,
  kPcm24,
  kFloat32,
};

std::string_view SampleFormatName(SampleFormat format);
std::optional<SampleFormat> ParseSampleFormat(std::string_view name);

struct WavInfo {
  int sample_rate_hz = 0;
  int num_channels = 0;
  size_t num_frames = 0;
  SampleFormat format = SampleFormat::kPcm16;
};

// Nearest value representable in `format`. PCM saturates at full scale;
// `clipped` is set when the input lies outside the representable range
// (for float output, outside [-1, 1]).
double QuantizeSample(double x, SampleFormat format, bool* clipped);

// Reads only the header chunks.
absl::StatusOr<WavInfo> ReadWavInfo(const std::filesystem::path& path);

// Reads PCM 16/24-bit or 32-bit float, mono or stereo. PCM is scaled so
// full scale maps to [-1, 1).
absl::StatusOr<AudioBuffer> ReadWav(const std::filesystem::path& path,
                                    WavInfo* info = nullptr);

// Like ReadWav, but fails unless the file has the expected rate and channel
// count.
absl::StatusOr<AudioBuffer> ReadWavExpecting(const std::filesystem::path& path,
                                             int sample_rate_hz,
                                             int num_channels);

// Writes `audio` in `format`, creating parent directories. PCM samples are
// rounded and saturated; the number of saturated samples is stored in
// `clipped` when non-null. Float output is written as is and out-of-range
// samples are only counted.
absl::Status WriteWav(const std::filesystem::path& path,
                      const AudioBuffer& audio, SampleFormat format,
                      size_t* clipped = nullptr);

}  // namespace cadenza

#endif  // CADENZA_WAV_IO_H_
