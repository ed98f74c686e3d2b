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

#include "cadenza/metrics.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "cadenza/fft.h"
#include "cadenza/mixing.h"
#include "cadenza/scene_dataset.h"

namespace cadenza {
namespace {

constexpr double kPowerFloor = 1e-30;
// Below this variance (dB^2) an envelope counts as constant.
constexpr double kFlatVariance = 1e-10;

// Pearson correlation; sets *flat_x / *flat_y when a side is constant.
double Pearson(std::span<const double> x, std::span<const double> y,
               bool* flat_x, bool* flat_y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  *flat_x = sxx / n < kFlatVariance;
  *flat_y = syy / n < kFlatVariance;
  if (*flat_x || *flat_y) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

BuiltinMetric::Analysis BuiltinMetric::Analyze(std::span<const double> x,
                                               int fs) const {
  const size_t frame =
      std::max<size_t>(2, std::lround(options_.frame_ms * 1e-3 * fs));
  const size_t hop =
      std::max<size_t>(1, std::lround(options_.hop_ms * 1e-3 * fs));
  const size_t nfft = NextPowerOfTwo(frame);
  const size_t num_frames =
      x.size() <= frame ? 1 : 1 + (x.size() - frame + hop - 1) / hop;

  std::vector<double> window(frame);
  double window_energy = 0.0;
  for (size_t i = 0; i < frame; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / frame);
    window_energy += window[i] * window[i];
  }

  // Band edges, log spaced; bins are assigned by their center frequency.
  Analysis a;
  const int nb = options_.num_bands;
  std::vector<double> edges(nb + 1);
  for (int b = 0; b <= nb; ++b) {
    edges[b] = options_.low_edge_hz *
               std::pow(options_.high_edge_hz / options_.low_edge_hz,
                        static_cast<double>(b) / nb);
  }
  RealFft fft(nfft);
  std::vector<int> bin_band(fft.num_bins(), -1);
  a.band_has_bins.assign(nb, false);
  for (size_t k = 1; k < fft.num_bins(); ++k) {
    const double f = static_cast<double>(k) * fs / nfft;
    if (f < edges[0] || f >= edges[nb] || 2.0 * f >= fs) continue;
    const int b =
        static_cast<int>(std::upper_bound(edges.begin(), edges.end(), f) -
                         edges.begin()) -
        1;
    bin_band[k] = b;
    a.band_has_bins[b] = true;
  }
  a.centers_hz.resize(nb);
  for (int b = 0; b < nb; ++b) {
    a.centers_hz[b] = std::sqrt(edges[b] * edges[b + 1]);
  }

  a.levels_db.assign(nb, std::vector<double>(num_frames));
  std::vector<double> buf(nfft);
  std::vector<std::complex<double>> spec(fft.num_bins());
  std::vector<double> power(nb);
  // One-sided spectrum energy -> windowed mean square.
  const double scale = 2.0 / (static_cast<double>(nfft) * window_energy);
  for (size_t t = 0; t < num_frames; ++t) {
    std::fill(buf.begin(), buf.end(), 0.0);
    const size_t start = t * hop;
    for (size_t i = 0; i < frame && start + i < x.size(); ++i) {
      buf[i] = x[start + i] * window[i];
    }
    fft.Forward(buf, spec);
    std::fill(power.begin(), power.end(), 0.0);
    for (size_t k = 0; k < spec.size(); ++k) {
      if (bin_band[k] >= 0) power[bin_band[k]] += std::norm(spec[k]);
    }
    for (int b = 0; b < nb; ++b) {
      const double ms = power[b] * scale;
      a.levels_db[b][t] = 10.0 * std::log10(2.0 * ms + kPowerFloor) +
                          options_.full_scale_db_spl;
    }
  }
  return a;
}

absl::StatusOr<double> BuiltinMetric::Score(std::span<const double> processed,
                                            std::span<const double> reference,
                                            const Audiogram& audiogram,
                                            int fs) const {
  if (processed.empty() || reference.empty()) {
    return absl::InvalidArgumentError("metric input has zero length");
  }
  if (fs <= 0)
    return absl::InvalidArgumentError("sample rate must be positive");
  const size_t n = std::max(processed.size(), reference.size());
  std::vector<double> p(processed.begin(), processed.end());
  std::vector<double> r(reference.begin(), reference.end());
  p.resize(n, 0.0);
  r.resize(n, 0.0);
  if (std::all_of(p.begin(), p.end(), [](double v) { return v == 0.0; })) {
    return 0.0;
  }

  const Analysis ra = Analyze(r, fs);
  const Analysis pa = Analyze(p, fs);
  double sum = 0.0;
  int included = 0;
  std::vector<double> rx;
  std::vector<double> px;
  for (size_t b = 0; b < ra.centers_hz.size(); ++b) {
    if (!ra.band_has_bins[b]) continue;
    const double threshold = audiogram.InterpolatedThreshold(ra.centers_hz[b]);
    rx.clear();
    px.clear();
    for (size_t t = 0; t < ra.levels_db[b].size(); ++t) {
      if (ra.levels_db[b][t] > threshold) {
        rx.push_back(ra.levels_db[b][t]);
        px.push_back(pa.levels_db[b][t]);
      }
    }
    if (static_cast<int>(rx.size()) < options_.min_audible_frames) continue;
    bool flat_r = false;
    bool flat_p = false;
    double rho = Pearson(rx, px, &flat_r, &flat_p);
    if (flat_r) rho = flat_p ? 1.0 : 0.0;
    sum += rho;
    ++included;
  }
  if (included == 0) return 0.0;
  return std::clamp(sum / included, 0.0, 1.0);
}

absl::StatusOr<ReferenceBundle> PresentReference(const SceneSpec& scene,
                                                 const StemSet& true_stems,
                                                 std::span<const HrirSet> hrirs,
                                                 bool with_stems) {
  ReferenceBundle ref;
  auto remix = PresentToListenerPosition(
      RemixWithGains(true_stems, scene.gains), scene, hrirs);
  if (!remix.ok()) return remix.status();
  ref.remix = *std::move(remix);
  if (!with_stems) return ref;
  for (Stem s : kAllStems) {
    auto stem = PresentToListenerPosition(true_stems.stem(s), scene, hrirs);
    if (!stem.ok()) return stem.status();
    ref.stems[static_cast<size_t>(s)] = *std::move(stem);
  }
  return ref;
}

absl::StatusOr<ReferenceBundle> AmplifyReference(
    const ReferenceBundle& presented, const Listener& listener, int nalr_taps) {
  ReferenceBundle ref;
  auto remix = AmplifyForListener(presented.remix, listener, nalr_taps);
  if (!remix.ok()) return remix.status();
  ref.remix = *std::move(remix);
  for (size_t i = 0; i < 4; ++i) {
    if (presented.stems[i].empty()) continue;
    auto stem = AmplifyForListener(presented.stems[i], listener, nalr_taps);
    if (!stem.ok()) return stem.status();
    ref.stems[i] = *std::move(stem);
  }
  return ref;
}

absl::StatusOr<ReferenceBundle> BuildReference(const SceneSpec& scene,
                                               const StemSet& true_stems,
                                               const Listener& listener,
                                               std::span<const HrirSet> hrirs,
                                               int nalr_taps) {
  auto presented = PresentReference(scene, true_stems, hrirs);
  if (!presented.ok()) return presented.status();
  return AmplifyReference(*presented, listener, nalr_taps);
}

absl::StatusOr<double> ScoreRemix(const AudioBuffer& processed,
                                  const ReferenceBundle& reference,
                                  const Listener& listener,
                                  const MetricBackend& backend) {
  if (processed.num_channels() != 2 || reference.remix.num_channels() != 2) {
    return absl::InvalidArgumentError("remix scoring needs stereo signals");
  }
  if (processed.sample_rate_hz() != reference.remix.sample_rate_hz()) {
    return absl::InvalidArgumentError("processed and reference rates differ");
  }
  const int fs = processed.sample_rate_hz();
  auto left = backend.Score(processed.channel(0), reference.remix.channel(0),
                            listener.left, fs);
  if (!left.ok()) return left.status();
  auto right = backend.Score(processed.channel(1), reference.remix.channel(1),
                             listener.right, fs);
  if (!right.ok()) return right.status();
  return (*left + *right) / 2.0;
}

absl::StatusOr<double> ScoreVdbo(const std::array<AudioBuffer, 4>& processed,
                                 const ReferenceBundle& reference,
                                 const Listener& listener,
                                 const MetricBackend& backend) {
  double sum = 0.0;
  for (Stem s : kAllStems) {
    const AudioBuffer& p = processed[static_cast<size_t>(s)];
    const AudioBuffer& r = reference.stems[static_cast<size_t>(s)];
    if (p.num_channels() != 2 || r.num_channels() != 2 ||
        p.sample_rate_hz() != r.sample_rate_hz()) {
      return absl::InvalidArgumentError(
          absl::StrCat("stem ", std::string(StemName(s)),
                       " does not match its reference format"));
    }
    for (int ear = 0; ear < 2; ++ear) {
      auto score = backend.Score(p.channel(ear), r.channel(ear),
                                 ear == 0 ? listener.left : listener.right,
                                 p.sample_rate_hz());
      if (!score.ok()) return score.status();
      sum += *score;
    }
  }
  return sum / 8.0;
}

}  // namespace cadenza
