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

#include "cadenza/fixtures.h"

#include <cmath>
#include <numbers>
#include <random>

#include "absl/strings/str_format.h"
#include "cadenza/rng.h"
#include "cadenza/wav_io.h"

namespace cadenza {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct StereoTrack {
  std::vector<double> left;
  std::vector<double> right;
};

AudioBuffer ToBuffer(int fs, StereoTrack t) {
  return *AudioBuffer::Create(fs, {std::move(t.left), std::move(t.right)});
}

StereoTrack Panned(const std::vector<double>& mono, double pan) {
  // pan in [-1, 1], constant-power.
  const double theta = (pan + 1.0) * std::numbers::pi / 4.0;
  StereoTrack t{mono, mono};
  for (size_t i = 0; i < mono.size(); ++i) {
    t.left[i] *= std::cos(theta);
    t.right[i] *= std::sin(theta);
  }
  return t;
}

std::vector<double> Voice(int fs, size_t n, Rng& rng) {
  std::vector<double> out(n);
  const size_t note_len = fs / 2;
  double phase = 0.0;
  double f0 = 220.0;
  std::uniform_int_distribution<int> step(-4, 4);
  for (size_t i = 0; i < n; ++i) {
    if (i % note_len == 0) f0 = 220.0 * std::pow(2.0, step(rng) / 12.0);
    const double t = static_cast<double>(i) / fs;
    const double f = f0 * (1.0 + 0.01 * std::sin(kTwoPi * 5.0 * t));
    phase += kTwoPi * f / fs;
    // sin(h * phase) by the angle-addition recurrence.
    const double s1 = std::sin(phase);
    const double c1 = std::cos(phase);
    double sh = s1;
    double ch = c1;
    double v = 0.0;
    for (int h = 1; h <= 8; ++h) {
      v += sh / h;
      const double next = sh * c1 + ch * s1;
      ch = ch * c1 - sh * s1;
      sh = next;
    }
    const double syllable = 0.6 + 0.4 * std::sin(kTwoPi * 4.0 * t);
    out[i] = 0.08 * syllable * v;
  }
  return out;
}

std::vector<double> Drums(int fs, size_t n, Rng& rng) {
  std::vector<double> out(n, 0.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  const size_t beat = fs / 2;
  for (size_t b = 0; b * beat < n; ++b) {
    const bool kick = b % 2 == 0;
    for (size_t k = 0; k < beat && b * beat + k < n; ++k) {
      const double t = static_cast<double>(k) / fs;
      const double v = kick ? std::sin(kTwoPi * 60.0 * t) * std::exp(-t / 0.05)
                            : noise(rng) * 0.5 * std::exp(-t / 0.03);
      out[b * beat + k] = 0.35 * v;
    }
  }
  // Hi-hat texture keeps the stem active between hits.
  double prev = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double w = noise(rng);
    out[i] += 0.01 * (w - prev);
    prev = w;
  }
  return out;
}

std::vector<double> Bass(int fs, size_t n, Rng& rng) {
  std::vector<double> out(n);
  const size_t bar = 2 * static_cast<size_t>(fs);
  std::uniform_int_distribution<int> root(0, 7);
  double f = 55.0;
  double phase = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (i % bar == 0) f = 55.0 * std::pow(2.0, root(rng) / 12.0);
    phase += kTwoPi * f / fs;
    out[i] = 0.18 * (std::sin(phase) + 0.3 * std::sin(2.0 * phase));
  }
  return out;
}

StereoTrack Pad(int fs, size_t n, Rng& rng) {
  StereoTrack t{std::vector<double>(n), std::vector<double>(n)};
  std::normal_distribution<double> noise(0.0, 1.0);
  const double chord[3] = {330.0, 415.3, 495.0};
  double lp_l = 0.0;
  double lp_r = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double time = static_cast<double>(i) / fs;
    double tone = 0.0;
    for (double f : chord) tone += std::sin(kTwoPi * f * time);
    const double swell = 0.7 + 0.3 * std::sin(kTwoPi * 0.25 * time);
    lp_l += 0.2 * (noise(rng) - lp_l);
    lp_r += 0.2 * (noise(rng) - lp_r);
    t.left[i] = swell * (0.04 * tone + 0.05 * lp_l);
    t.right[i] = swell * (0.04 * tone + 0.05 * lp_r);
  }
  return t;
}

}  // namespace

Track MakeSyntheticTrack(std::string id, int sample_rate_hz, double dur_s,
                         uint64_t seed) {
  const size_t n = static_cast<size_t>(std::llround(dur_s * sample_rate_hz));
  Rng rng(seed);
  std::array<AudioBuffer, 4> stems;
  stems[0] =
      ToBuffer(sample_rate_hz, Panned(Voice(sample_rate_hz, n, rng), 0.0));
  stems[1] =
      ToBuffer(sample_rate_hz, Panned(Drums(sample_rate_hz, n, rng), -0.2));
  stems[2] =
      ToBuffer(sample_rate_hz, Panned(Bass(sample_rate_hz, n, rng), 0.1));
  stems[3] = ToBuffer(sample_rate_hz, Pad(sample_rate_hz, n, rng));
  return {std::move(id), *StemSet::Create(std::move(stems))};
}

std::vector<HrirSet> MakeSyntheticHrirs(int sample_rate_hz, int num_subjects,
                                        uint64_t seed) {
  constexpr size_t kLength = 64;
  std::vector<HrirSet> sets;
  for (int s = 0; s < num_subjects; ++s) {
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(s)));
    std::uniform_real_distribution<double> head(0.8, 1.2);
    const double head_scale = head(rng);
    std::vector<HrirSet::Entry> entries;
    for (SpeakerSide side : {SpeakerSide::kLeft, SpeakerSide::kRight}) {
      for (double az : {22.5, 30.0, 37.5}) {
        const double rad = az * std::numbers::pi / 180.0;
        const size_t base = 4;
        const size_t itd = static_cast<size_t>(
            std::lround(head_scale * 0.0007 * std::sin(rad) * sample_rate_hz));
        std::vector<double> ipsi(kLength, 0.0);
        std::vector<double> contra(kLength, 0.0);
        ipsi[base] = 0.9;
        const size_t c = std::min(kLength - 3, base + itd);
        const double shadow = 0.6 - 0.4 * std::sin(rad);
        contra[c] = 0.5 * shadow;
        contra[c + 1] = 0.3 * shadow;
        contra[c + 2] = 0.2 * shadow;
        HrirSet::Entry e;
        e.side = side;
        e.azimuth_deg = side == SpeakerSide::kLeft ? az : -az;
        e.irs = side == SpeakerSide::kLeft ? HrirPair{ipsi, contra}
                                           : HrirPair{contra, ipsi};
        entries.push_back(std::move(e));
      }
    }
    sets.push_back(*HrirSet::Create(absl::StrFormat("H%02d", s + 1),
                                    sample_rate_hz, std::move(entries)));
  }
  return sets;
}

std::vector<Listener> MakeSyntheticListeners() {
  // Base level at 250 Hz plus a slope per audiometric frequency index.
  struct Shape {
    double base;
    double slope;
  };
  const Shape shapes[] = {{0, 2}, {15, 3}, {25, 4}, {35, 5}, {45, 5}};
  std::vector<Listener> out;
  int n = 0;
  for (const Shape& s : shapes) {
    Audiogram::Levels left{};
    Audiogram::Levels right{};
    for (size_t i = 0; i < kNumAudiometricFrequencies; ++i) {
      left[i] = std::min(kMaxThresholdDbHl, s.base + s.slope * i);
      right[i] = std::min(kMaxThresholdDbHl, s.base + 5.0 + s.slope * i);
    }
    out.push_back({absl::StrFormat("L%04d", ++n), *Audiogram::Create(left),
                   *Audiogram::Create(right)});
  }
  return out;
}

absl::Status WriteFixtureDataRoot(const std::filesystem::path& root,
                                  const FixtureDataOptions& options) {
  const std::vector<Listener> listeners = MakeSyntheticListeners();
  absl::Status st = SaveListeners(root / "listeners.json", listeners);
  if (!st.ok()) return st;
  const std::vector<HrirSet> hrirs = MakeSyntheticHrirs(
      options.sample_rate_hz, options.num_hrir_subjects, options.seed);
  st = WriteHrirIndex(root / "hrir", hrirs);
  if (!st.ok()) return st;
  for (int t = 0; t < options.num_tracks; ++t) {
    const std::string id = absl::StrFormat("track_%02d", t + 1);
    const Track track =
        MakeSyntheticTrack(id, options.sample_rate_hz, options.track_dur_s,
                           DeriveSeed(options.seed, 1000 + t));
    const std::filesystem::path dir = root / "music" / id;
    for (Stem s : kAllStems) {
      st = WriteWav(dir / absl::StrFormat("%s.wav", std::string(StemName(s))),
                    track.stems.stem(s), SampleFormat::kFloat32);
      if (!st.ok()) return st;
    }
    st = WriteWav(dir / "mixture.wav", track.stems.Sum(),
                  SampleFormat::kFloat32);
    if (!st.ok()) return st;
  }
  return absl::OkStatus();
}

}  // namespace cadenza
