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

#include "cadenza/audio_buffer.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace cadenza {

absl::StatusOr<AudioBuffer> AudioBuffer::Create(
    int sample_rate_hz, std::vector<std::vector<double>> channels) {
  if (sample_rate_hz <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample rate must be positive, got ", sample_rate_hz));
  }
  if (channels.size() != 1 && channels.size() != 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected 1 or 2 channels, got ", channels.size()));
  }
  for (size_t c = 0; c < channels.size(); ++c) {
    if (channels[c].size() != channels[0].size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("channel ", c, " has ", channels[c].size(),
                       " frames, channel 0 has ", channels[0].size()));
    }
    for (size_t i = 0; i < channels[c].size(); ++i) {
      if (!std::isfinite(channels[c][i])) {
        return absl::InvalidArgumentError(
            absl::StrCat("non-finite sample at channel ", c, " frame ", i));
      }
    }
  }
  return AudioBuffer(sample_rate_hz, std::move(channels));
}

AudioBuffer AudioBuffer::Zeros(int sample_rate_hz, int num_channels,
                               size_t num_frames) {
  return AudioBuffer(sample_rate_hz,
                     std::vector<std::vector<double>>(
                         num_channels, std::vector<double>(num_frames, 0.0)));
}

double AudioBuffer::MaxAbs() const {
  double peak = 0.0;
  for (const auto& ch : channels_) {
    for (double v : ch) peak = std::max(peak, std::abs(v));
  }
  return peak;
}

AudioBuffer AudioBuffer::Slice(size_t begin, size_t count) const {
  std::vector<std::vector<double>> out;
  out.reserve(channels_.size());
  for (const auto& ch : channels_) {
    const size_t b = std::min(begin, ch.size());
    const size_t e = std::min(ch.size(), b + count);
    out.emplace_back(ch.begin() + b, ch.begin() + e);
  }
  return AudioBuffer(sample_rate_hz_, std::move(out));
}

AudioBuffer AudioBuffer::ChannelAsMono(int c) const {
  return AudioBuffer(sample_rate_hz_, {channels_[c]});
}

void AudioBuffer::Scale(double gain) {
  for (auto& ch : channels_) {
    for (double& v : ch) v *= gain;
  }
}

absl::StatusOr<AudioBuffer> MakeStereo(const AudioBuffer& left,
                                       const AudioBuffer& right) {
  if (left.num_channels() != 1 || right.num_channels() != 1) {
    return absl::InvalidArgumentError("MakeStereo expects two mono buffers");
  }
  if (left.sample_rate_hz() != right.sample_rate_hz()) {
    return absl::InvalidArgumentError("MakeStereo: sample rate mismatch");
  }
  auto l = left.channel(0);
  auto r = right.channel(0);
  return AudioBuffer::Create(left.sample_rate_hz(),
                             {std::vector<double>(l.begin(), l.end()),
                              std::vector<double>(r.begin(), r.end())});
}

std::string_view StemName(Stem stem) {
  switch (stem) {
    case Stem::kVocals:
      return "vocals";
    case Stem::kDrums:
      return "drums";
    case Stem::kBass:
      return "bass";
    case Stem::kOther:
      return "other";
  }
  return "unknown";
}

std::optional<Stem> StemFromName(std::string_view name) {
  for (Stem s : kAllStems) {
    if (StemName(s) == name) return s;
  }
  return std::nullopt;
}

absl::StatusOr<StemSet> StemSet::Create(std::array<AudioBuffer, 4> stems,
                                        std::optional<AudioBuffer> mixture,
                                        double tolerance) {
  const int fs = stems[0].sample_rate_hz();
  const size_t n = stems[0].num_frames();
  for (Stem s : kAllStems) {
    const AudioBuffer& b = stems[static_cast<size_t>(s)];
    if (b.num_channels() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("stem ", std::string(StemName(s)), " is not stereo"));
    }
    if (b.sample_rate_hz() != fs || b.num_frames() != n) {
      return absl::InvalidArgumentError(absl::StrCat(
          "stem ", std::string(StemName(s)), " (", b.sample_rate_hz(), " Hz, ",
          b.num_frames(), " frames) does not match vocals (", fs, " Hz, ", n,
          " frames)"));
    }
  }
  StemSet set;
  set.stems_ = std::move(stems);
  if (mixture.has_value()) {
    if (mixture->num_channels() != 2 || mixture->sample_rate_hz() != fs ||
        mixture->num_frames() != n) {
      return absl::InvalidArgumentError(
          "mixture does not match the stems' format");
    }
    const AudioBuffer sum = set.Sum();
    double err = 0.0;
    double ref = 0.0;
    for (int c = 0; c < 2; ++c) {
      auto m = mixture->channel(c);
      auto s = sum.channel(c);
      for (size_t i = 0; i < n; ++i) {
        err += (m[i] - s[i]) * (m[i] - s[i]);
        ref += m[i] * m[i];
      }
    }
    const double rel = ref > 0.0 ? std::sqrt(err / ref) : std::sqrt(err);
    if (rel > tolerance) {
      return absl::InvalidArgumentError(
          absl::StrCat("mixture deviates from the stem sum by relative RMS ",
                       rel, " (tolerance ", tolerance, ")"));
    }
    set.mixture_relative_error_ = rel;
    set.mixture_ = std::move(mixture);
  }
  return set;
}

AudioBuffer StemSet::Sum() const {
  AudioBuffer out = AudioBuffer::Zeros(sample_rate_hz(), 2, num_frames());
  for (const AudioBuffer& s : stems_) {
    for (int c = 0; c < 2; ++c) {
      auto dst = out.mutable_channel(c);
      auto src = s.channel(c);
      for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
  }
  return out;
}

StemSet StemSet::Slice(size_t begin, size_t count) const {
  StemSet out;
  for (size_t i = 0; i < 4; ++i) out.stems_[i] = stems_[i].Slice(begin, count);
  if (mixture_.has_value()) out.mixture_ = mixture_->Slice(begin, count);
  out.mixture_relative_error_ = mixture_relative_error_;
  return out;
}

double GainSet::SpreadDb() const {
  double mean = 0.0;
  for (double g : db) mean += g;
  mean /= 4.0;
  double var = 0.0;
  for (double g : db) var += (g - mean) * (g - mean);
  return std::sqrt(var / 4.0);
}

int GainSet::NumAltered() const {
  return static_cast<int>(
      std::count_if(db.begin(), db.end(), [](double g) { return g != 0.0; }));
}

bool GainSet::IsFinite() const {
  return std::all_of(db.begin(), db.end(),
                     [](double g) { return std::isfinite(g); });
}

double DbToAmplitude(double db) { return std::pow(10.0, db / 20.0); }

}  // namespace cadenza
