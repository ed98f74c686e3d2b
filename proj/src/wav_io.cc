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

#include "cadenza/wav_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"

namespace cadenza {
namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t ReadU16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t ReadU32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

void PutU16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

int BytesPerSample(SampleFormat format) {
  switch (format) {
    case SampleFormat::kPcm16:
      return 2;
    case SampleFormat::kPcm24:
      return 3;
    case SampleFormat::kFloat32:
      return 4;
  }
  return 0;
}

struct ParsedHeader {
  WavInfo info;
  size_t data_offset = 0;
  size_t data_size = 0;
};

absl::StatusOr<ParsedHeader> ParseHeader(const std::string& bytes,
                                         const std::string& name) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 12 || std::memcmp(p, "RIFF", 4) != 0 ||
      std::memcmp(p + 8, "WAVE", 4) != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, ": not a RIFF/WAVE file"));
  }
  ParsedHeader header;
  bool have_fmt = false;
  bool have_data = false;
  uint16_t format_tag = 0;
  uint16_t bits = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint32_t chunk_size = ReadU32(p + pos + 4);
    const size_t body = pos + 8;
    if (std::memcmp(p + pos, "fmt ", 4) == 0) {
      if (chunk_size < 16 || body + chunk_size > bytes.size()) {
        return absl::InvalidArgumentError(
            absl::StrCat(name, ": truncated fmt chunk"));
      }
      format_tag = ReadU16(p + body);
      header.info.num_channels = ReadU16(p + body + 2);
      header.info.sample_rate_hz = static_cast<int>(ReadU32(p + body + 4));
      bits = ReadU16(p + body + 14);
      if (format_tag == kFormatExtensible && chunk_size >= 40) {
        format_tag = ReadU16(p + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(p + pos, "data", 4) == 0) {
      header.data_offset = body;
      header.data_size = std::min<size_t>(chunk_size, bytes.size() - body);
      have_data = true;
      break;
    }
    pos = body + chunk_size + (chunk_size & 1);
  }
  if (!have_fmt || !have_data) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, ": missing fmt or data chunk"));
  }
  if (format_tag == kFormatPcm && bits == 16) {
    header.info.format = SampleFormat::kPcm16;
  } else if (format_tag == kFormatPcm && bits == 24) {
    header.info.format = SampleFormat::kPcm24;
  } else if (format_tag == kFormatFloat && bits == 32) {
    header.info.format = SampleFormat::kFloat32;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat(name, ": unsupported encoding (format tag ", format_tag,
                     ", ", bits, " bits)"));
  }
  if (header.info.num_channels < 1 || header.info.num_channels > 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        name, ": unsupported channel count ", header.info.num_channels));
  }
  if (header.info.sample_rate_hz <= 0) {
    return absl::InvalidArgumentError(absl::StrCat(name, ": bad sample rate"));
  }
  const size_t frame_bytes =
      static_cast<size_t>(BytesPerSample(header.info.format)) *
      header.info.num_channels;
  header.info.num_frames = header.data_size / frame_bytes;
  return header;
}

absl::StatusOr<std::string> Slurp(const std::filesystem::path& path,
                                  size_t limit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open ", path.string()));
  }
  std::string bytes;
  if (limit == 0) {
    in.seekg(0, std::ios::end);
    bytes.resize(static_cast<size_t>(in.tellg()));
    in.seekg(0);
    in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  } else {
    bytes.resize(limit);
    in.read(bytes.data(), static_cast<std::streamsize>(limit));
    bytes.resize(static_cast<size_t>(in.gcount()));
  }
  return bytes;
}

}  // namespace

std::string_view SampleFormatName(SampleFormat format) {
  switch (format) {
    case SampleFormat::kPcm16:
      return "pcm16";
    case SampleFormat::kPcm24:
      return "pcm24";
    case SampleFormat::kFloat32:
      return "float32";
  }
  return "unknown";
}

std::optional<SampleFormat> ParseSampleFormat(std::string_view name) {
  if (name == "pcm16" || name == "16") return SampleFormat::kPcm16;
  if (name == "pcm24" || name == "24") return SampleFormat::kPcm24;
  if (name == "float32" || name == "float") return SampleFormat::kFloat32;
  return std::nullopt;
}

double QuantizeSample(double x, SampleFormat format, bool* clipped) {
  bool clip = false;
  double out = x;
  switch (format) {
    case SampleFormat::kPcm16:
    case SampleFormat::kPcm24: {
      const double scale = format == SampleFormat::kPcm16 ? 32768.0 : 8388608.0;
      double q = std::nearbyint(x * scale);
      if (q > scale - 1.0) {
        q = scale - 1.0;
        clip = true;
      } else if (q < -scale) {
        q = -scale;
        clip = true;
      }
      out = q / scale;
      break;
    }
    case SampleFormat::kFloat32:
      out = static_cast<double>(static_cast<float>(x));
      clip = std::abs(x) > 1.0;
      break;
  }
  if (clipped != nullptr) *clipped = clip;
  return out;
}

absl::StatusOr<WavInfo> ReadWavInfo(const std::filesystem::path& path) {
  // Headers of files written here fit easily; foreign files with large
  // metadata chunks fall back to a full read.
  auto head = Slurp(path, 4096);
  if (!head.ok()) return head.status();
  auto parsed = ParseHeader(*head, path.string());
  if (parsed.ok()) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (!ec) {
      const size_t frame_bytes =
          static_cast<size_t>(BytesPerSample(parsed->info.format)) *
          parsed->info.num_channels;
      const size_t available =
          size > parsed->data_offset ? size - parsed->data_offset : 0;
      const size_t declared = ReadU32(reinterpret_cast<const unsigned char*>(
          head->data() + parsed->data_offset - 4));
      parsed->info.num_frames = std::min(available, declared) / frame_bytes;
    }
    return parsed->info;
  }
  auto full = Slurp(path, 0);
  if (!full.ok()) return full.status();
  auto reparsed = ParseHeader(*full, path.string());
  if (!reparsed.ok()) return reparsed.status();
  return reparsed->info;
}

absl::StatusOr<AudioBuffer> ReadWav(const std::filesystem::path& path,
                                    WavInfo* info) {
  auto bytes = Slurp(path, 0);
  if (!bytes.ok()) return bytes.status();
  auto header = ParseHeader(*bytes, path.string());
  if (!header.ok()) return header.status();
  const WavInfo& wi = header->info;
  const auto* p = reinterpret_cast<const unsigned char*>(bytes->data()) +
                  header->data_offset;
  const int bps = BytesPerSample(wi.format);
  std::vector<std::vector<double>> channels(wi.num_channels,
                                            std::vector<double>(wi.num_frames));
  for (size_t i = 0; i < wi.num_frames; ++i) {
    for (int c = 0; c < wi.num_channels; ++c) {
      const unsigned char* s = p + (i * wi.num_channels + c) * bps;
      double v = 0.0;
      switch (wi.format) {
        case SampleFormat::kPcm16:
          v = static_cast<int16_t>(ReadU16(s)) / 32768.0;
          break;
        case SampleFormat::kPcm24: {
          int32_t q = static_cast<int32_t>(s[0] | (s[1] << 8) | (s[2] << 16));
          if (q & 0x800000) q -= 0x1000000;
          v = q / 8388608.0;
          break;
        }
        case SampleFormat::kFloat32: {
          float f;
          std::memcpy(&f, s, 4);
          v = f;
          break;
        }
      }
      channels[c][i] = v;
    }
  }
  if (info != nullptr) *info = wi;
  auto buffer = AudioBuffer::Create(wi.sample_rate_hz, std::move(channels));
  if (!buffer.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": ", buffer.status().message()));
  }
  return buffer;
}

absl::StatusOr<AudioBuffer> ReadWavExpecting(const std::filesystem::path& path,
                                             int sample_rate_hz,
                                             int num_channels) {
  auto audio = ReadWav(path);
  if (!audio.ok()) return audio.status();
  if (audio->sample_rate_hz() != sample_rate_hz) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": sample rate ", audio->sample_rate_hz(),
                     " Hz, expected ", sample_rate_hz));
  }
  if (audio->num_channels() != num_channels) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": ", audio->num_channels(),
                     " channels, expected ", num_channels));
  }
  return audio;
}

absl::Status WriteWav(const std::filesystem::path& path,
                      const AudioBuffer& audio, SampleFormat format,
                      size_t* clipped) {
  const int bps = BytesPerSample(format);
  const int channels = audio.num_channels();
  const size_t frames = audio.num_frames();
  const uint32_t data_bytes =
      static_cast<uint32_t>(frames * channels * static_cast<size_t>(bps));
  std::string out;
  out.reserve(44 + data_bytes);
  out.append("RIFF");
  PutU32(out, 36 + data_bytes);
  out.append("WAVEfmt ");
  PutU32(out, 16);
  PutU16(out, format == SampleFormat::kFloat32 ? kFormatFloat : kFormatPcm);
  PutU16(out, static_cast<uint16_t>(channels));
  PutU32(out, static_cast<uint32_t>(audio.sample_rate_hz()));
  PutU32(out, static_cast<uint32_t>(audio.sample_rate_hz() * channels * bps));
  PutU16(out, static_cast<uint16_t>(channels * bps));
  PutU16(out, static_cast<uint16_t>(8 * bps));
  out.append("data");
  PutU32(out, data_bytes);

  size_t num_clipped = 0;
  for (size_t i = 0; i < frames; ++i) {
    for (int c = 0; c < channels; ++c) {
      bool clip = false;
      const double q = QuantizeSample(audio.channel(c)[i], format, &clip);
      num_clipped += clip ? 1 : 0;
      switch (format) {
        case SampleFormat::kPcm16:
          PutU16(out, static_cast<uint16_t>(
                          static_cast<int16_t>(std::lround(q * 32768.0))));
          break;
        case SampleFormat::kPcm24: {
          const int32_t v = static_cast<int32_t>(std::lround(q * 8388608.0));
          out.push_back(static_cast<char>(v & 0xFF));
          out.push_back(static_cast<char>((v >> 8) & 0xFF));
          out.push_back(static_cast<char>((v >> 16) & 0xFF));
          break;
        }
        case SampleFormat::kFloat32: {
          const float f = static_cast<float>(q);
          char b[4];
          std::memcpy(b, &f, 4);
          out.append(b, 4);
          break;
        }
      }
    }
  }
  if (clipped != nullptr) *clipped = num_clipped;

  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot open ", path.string(), " for writing"));
  }
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) {
    return absl::DataLossError(absl::StrCat("write failed: ", path.string()));
  }
  return absl::OkStatus();
}

}  // namespace cadenza
