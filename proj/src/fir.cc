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

#include "cadenza/fir.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "cadenza/convolution.h"
#include "cadenza/fft.h"
#include "json.hpp"

namespace cadenza {
namespace {

std::vector<double> KaiserWindow(size_t n, double beta) {
  std::vector<double> w(n, 1.0);
  if (n == 1) return w;
  const double denom = std::cyl_bessel_i(0.0, beta);
  for (size_t i = 0; i < n; ++i) {
    const double r =
        2.0 * static_cast<double>(i) / static_cast<double>(n - 1) - 1.0;
    w[i] =
        std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) /
        denom;
  }
  return w;
}

std::vector<double> SampleAndTruncate(std::span<const GainPoint> points,
                                      int num_taps, int sample_rate_hz,
                                      const std::vector<double>& window) {
  const size_t fft_size =
      std::max<size_t>(4096, NextPowerOfTwo(8 * static_cast<size_t>(num_taps)));
  const RealFft fft(fft_size);
  std::vector<std::complex<double>> spectrum(fft.num_bins());
  for (size_t k = 0; k < spectrum.size(); ++k) {
    const double f =
        static_cast<double>(k) * sample_rate_hz / static_cast<double>(fft_size);
    spectrum[k] = DbToAmplitude(InterpolateGainDb(points, f));
  }
  std::vector<double> impulse(fft_size);
  fft.Inverse(spectrum, impulse);

  const size_t half = static_cast<size_t>(num_taps - 1) / 2;
  std::vector<double> taps(num_taps);
  for (size_t i = 0; i < taps.size(); ++i) {
    const size_t src = (i + fft_size - half) % fft_size;
    taps[i] = impulse[src] / static_cast<double>(fft_size) * window[i];
  }
  for (size_t i = 0; i < half; ++i) {
    const double avg = 0.5 * (taps[i] + taps[taps.size() - 1 - i]);
    taps[i] = avg;
    taps[taps.size() - 1 - i] = avg;
  }
  return taps;
}

}  // namespace

absl::StatusOr<FirFilter> FirFilter::Create(std::vector<double> taps,
                                            int sample_rate_hz) {
  if (sample_rate_hz <= 0) {
    return absl::InvalidArgumentError("FIR sample rate must be positive");
  }
  if (taps.empty() || taps.size() % 2 == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("FIR length must be odd, got ", taps.size()));
  }
  for (size_t i = 0; i < taps.size(); ++i) {
    if (!std::isfinite(taps[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("FIR tap ", i, " is not finite"));
    }
    if (std::abs(taps[i] - taps[taps.size() - 1 - i]) > kFirSymmetryTolerance) {
      return absl::InvalidArgumentError(
          absl::StrCat("FIR taps are not symmetric at index ", i,
                       " (linear phase required)"));
    }
  }
  return FirFilter(std::move(taps), sample_rate_hz);
}

FirFilter FirFilter::Identity(int sample_rate_hz) {
  return FirFilter({1.0}, sample_rate_hz);
}

double FirFilter::MagnitudeDb(double frequency_hz) const {
  // Symmetric taps: H(w) = e^{-jwc} (h[c] + 2 sum_m h[c+m] cos(m w)).
  const size_t c = group_delay_samples();
  const double w = 2.0 * std::numbers::pi * frequency_hz / sample_rate_hz_;
  double amplitude = taps_[c];
  for (size_t m = 1; m <= c; ++m) {
    amplitude += 2.0 * taps_[c + m] * std::cos(static_cast<double>(m) * w);
  }
  return 20.0 * std::log10(std::max(std::abs(amplitude),
                                    std::numeric_limits<double>::min()));
}

std::string FirFilter::ToJson() const {
  nlohmann::json j;
  j["sample_rate_hz"] = sample_rate_hz_;
  j["taps"] = taps_;
  return j.dump();
}

double InterpolateGainDb(std::span<const GainPoint> points,
                         double frequency_hz) {
  if (points.empty()) return 0.0;
  if (frequency_hz <= points.front().frequency_hz) {
    return points.front().gain_db;
  }
  if (frequency_hz >= points.back().frequency_hz) return points.back().gain_db;
  size_t hi = 1;
  while (points[hi].frequency_hz < frequency_hz) ++hi;
  const GainPoint& a = points[hi - 1];
  const GainPoint& b = points[hi];
  const double t = std::log(frequency_hz / a.frequency_hz) /
                   std::log(b.frequency_hz / a.frequency_hz);
  return a.gain_db + t * (b.gain_db - a.gain_db);
}

absl::StatusOr<FirFilter> DesignFrequencySampledFir(
    std::span<const GainPoint> points, int num_taps, int sample_rate_hz,
    const FirDesignOptions& options) {
  if (num_taps % 2 == 0 || num_taps < kMinFirDesignTaps) {
    return absl::InvalidArgumentError(
        absl::StrCat("FIR design needs an odd tap count >= ", kMinFirDesignTaps,
                     ", got ", num_taps));
  }
  if (sample_rate_hz < kMinFirDesignSampleRate) {
    return absl::InvalidArgumentError(absl::StrCat(
        "FIR design needs a sample rate >= ", kMinFirDesignSampleRate,
        " Hz, got ", sample_rate_hz));
  }
  if (points.empty()) {
    return absl::InvalidArgumentError("FIR design needs a target curve");
  }
  for (size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].frequency_hz > 0.0) || !std::isfinite(points[i].gain_db) ||
        (i > 0 && points[i].frequency_hz <= points[i - 1].frequency_hz)) {
      return absl::InvalidArgumentError(
          "FIR target points must have positive, strictly increasing "
          "frequencies and finite gains");
    }
  }

  const std::vector<double> window =
      KaiserWindow(num_taps, options.kaiser_beta);
  const double nyquist = 0.5 * sample_rate_hz;
  std::vector<GainPoint> adjusted(points.begin(), points.end());

  std::vector<double> best;
  double best_error = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass <= options.refinement_passes; ++pass) {
    std::vector<double> taps =
        SampleAndTruncate(adjusted, num_taps, sample_rate_hz, window);
    auto filter = FirFilter::Create(taps, sample_rate_hz);
    if (!filter.ok()) return filter.status();
    double worst = 0.0;
    std::vector<double> errors(points.size(), 0.0);
    for (size_t i = 0; i < points.size(); ++i) {
      if (points[i].frequency_hz >= nyquist) continue;
      errors[i] =
          filter->MagnitudeDb(points[i].frequency_hz) - points[i].gain_db;
      worst = std::max(worst, std::abs(errors[i]));
    }
    if (worst < best_error) {
      best_error = worst;
      best = std::move(taps);
    }
    if (worst <= options.refinement_tolerance_db) break;
    for (size_t i = 0; i < points.size(); ++i) adjusted[i].gain_db -= errors[i];
  }
  return FirFilter::Create(std::move(best), sample_rate_hz);
}

double MaxControlPointErrorDb(const FirFilter& filter,
                              std::span<const GainPoint> points) {
  double worst = 0.0;
  for (const GainPoint& p : points) {
    if (p.frequency_hz >= 0.5 * filter.sample_rate_hz()) continue;
    worst = std::max(worst,
                     std::abs(filter.MagnitudeDb(p.frequency_hz) - p.gain_db));
  }
  return worst;
}

absl::StatusOr<AudioBuffer> ApplyFir(const AudioBuffer& x,
                                     const FirFilter& filter,
                                     bool compensate_delay) {
  if (x.sample_rate_hz() != filter.sample_rate_hz()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "signal is ", x.sample_rate_hz(), " Hz but filter is designed for ",
        filter.sample_rate_hz(), " Hz"));
  }
  const size_t n = x.num_frames();
  const size_t offset = compensate_delay ? filter.group_delay_samples() : 0;
  std::vector<std::vector<double>> out;
  for (int c = 0; c < x.num_channels(); ++c) {
    std::vector<double> y = ConvolveSignals(x.channel(c), filter.taps());
    std::vector<double> trimmed(n, 0.0);
    for (size_t i = 0; i < n && i + offset < y.size(); ++i) {
      trimmed[i] = y[i + offset];
    }
    out.push_back(std::move(trimmed));
  }
  return AudioBuffer::Create(x.sample_rate_hz(), std::move(out));
}

}  // namespace cadenza
