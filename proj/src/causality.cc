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

#include "cadenza/causality.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "absl/strings/str_cat.h"
#include "cadenza/convolution.h"
#include "cadenza/rng.h"

namespace cadenza {
namespace {

constexpr double kProbeNoiseStd = 0.1;
// The replaced tail is louder than the shared part so that any peak-driven
// dependence on it is guaranteed to show.
constexpr double kTailNoiseStd = 0.4;

AudioBuffer Noise(int fs, size_t frames, double std_dev, uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> dist(0.0, std_dev);
  AudioBuffer out = AudioBuffer::Zeros(fs, 2, frames);
  for (int c = 0; c < 2; ++c) {
    for (double& v : out.mutable_channel(c)) v = dist(rng);
  }
  return out;
}

// Largest difference between a and b over frames [0, t].
absl::StatusOr<double> PrefixDifference(const AudioBuffer& a,
                                        const AudioBuffer& b, size_t t) {
  if (a.num_channels() != b.num_channels() || a.num_frames() <= t ||
      b.num_frames() <= t) {
    return absl::InternalError(absl::StrCat(
        "processor output shape changed between runs or is shorter than "
        "its input (",
        a.num_channels(), "x", a.num_frames(), " vs ", b.num_channels(), "x",
        b.num_frames(), ")"));
  }
  double worst = 0.0;
  for (int c = 0; c < a.num_channels(); ++c) {
    auto x = a.channel(c);
    auto y = b.channel(c);
    for (size_t i = 0; i <= t; ++i)
      worst = std::max(worst, std::abs(x[i] - y[i]));
  }
  return worst;
}

}  // namespace

absl::StatusOr<CausalityReport> ProbeCausality(
    const AudioProcessor& processor, int sample_rate_hz,
    const CausalityProbeOptions& options) {
  if (sample_rate_hz <= 0 || options.num_probes < 1 ||
      options.signal_s <= 0.0 || options.bound_ms < 0.0 ||
      options.max_lookahead_ms < options.bound_ms) {
    return absl::InvalidArgumentError("invalid causality probe options");
  }
  const double fs = sample_rate_hz;
  const size_t n = static_cast<size_t>(std::llround(options.signal_s * fs));
  const size_t bound = static_cast<size_t>(options.bound_ms * fs / 1000.0);
  const size_t cap =
      static_cast<size_t>(std::ceil(options.max_lookahead_ms * fs / 1000.0));
  if (n < 2 * (cap + 1) + options.num_probes) {
    return absl::InvalidArgumentError(
        "probe signal too short for the requested lookahead cap");
  }

  auto run = [&](const AudioBuffer& in) -> absl::StatusOr<AudioBuffer> {
    auto out = processor(in);
    if (!out.ok()) {
      return absl::Status(out.status().code(),
                          absl::StrCat("processor failed during causality "
                                       "probe: ",
                                       out.status().message()));
    }
    return out;
  };

  const AudioBuffer base =
      Noise(sample_rate_hz, n, kProbeNoiseStd, DeriveSeed(options.seed, 0));
  auto base_out = run(base);
  if (!base_out.ok()) return base_out.status();

  CausalityReport report;
  report.bound_ms = options.bound_ms;
  report.bound_frames = bound;

  const AudioBuffer other =
      Noise(sample_rate_hz, n, kProbeNoiseStd, DeriveSeed(options.seed, 1));
  auto other_out = run(other);
  if (!other_out.ok()) return other_out.status();
  auto whole = PrefixDifference(*base_out, *other_out, n - 1);
  if (!whole.ok()) return whole.status();
  report.input_independent = *whole <= options.tolerance;

  bool violated = false;
  double worst_ms = 0.0;
  const size_t usable = n - cap - 1;
  for (int p = 0; p < options.num_probes; ++p) {
    const size_t t = (p + 1) * usable / (options.num_probes + 1);
    const AudioBuffer tail = Noise(sample_rate_hz, n, kTailNoiseStd,
                                   DeriveSeed(options.seed, 2 + p));
    // Outputs up to t differ when the inputs agree only up to t + delta.
    auto differs = [&](size_t delta) -> absl::StatusOr<bool> {
      AudioBuffer probe = base;
      for (int c = 0; c < 2; ++c) {
        auto dst = probe.mutable_channel(c);
        auto src = tail.channel(c);
        for (size_t i = t + delta + 1; i < n; ++i) dst[i] = src[i];
      }
      auto out = run(probe);
      if (!out.ok()) return out.status();
      auto diff = PrefixDifference(*base_out, *out, t);
      if (!diff.ok()) return diff.status();
      return *diff > options.tolerance;
    };

    auto at_bound = differs(bound);
    if (!at_bound.ok()) return at_bound.status();
    violated = violated || *at_bound;

    double probe_ms;
    auto at_cap = differs(cap);
    if (!at_cap.ok()) return at_cap.status();
    if (*at_cap) {
      probe_ms = std::numeric_limits<double>::infinity();
    } else {
      // Smallest delta in [0, cap] at which the outputs agree.
      size_t lo = 0;
      size_t hi = cap;
      while (lo < hi) {
        const size_t mid = lo + (hi - lo) / 2;
        auto d = differs(mid);
        if (!d.ok()) return d.status();
        if (*d) {
          lo = mid + 1;
        } else {
          hi = mid;
        }
      }
      probe_ms = 1000.0 * static_cast<double>(lo) / fs;
    }
    report.per_probe_ms.push_back(probe_ms);
    worst_ms = std::max(worst_ms, probe_ms);
  }
  report.measured_dependence_ms = worst_ms;
  report.pass = !violated && !report.input_independent;
  return report;
}

AudioProcessor CausalFirProcessor(std::vector<double> taps) {
  return [taps = std::move(taps)](
             const AudioBuffer& in) -> absl::StatusOr<AudioBuffer> {
    auto out = Convolve(in, taps);
    if (!out.ok()) return out.status();
    return out->Slice(0, in.num_frames());
  };
}

AudioProcessor LookaheadLimiter(double lookahead_ms, double threshold) {
  return [lookahead_ms,
          threshold](const AudioBuffer& in) -> absl::StatusOr<AudioBuffer> {
    const size_t n = in.num_frames();
    const size_t look = static_cast<size_t>(
        std::llround(lookahead_ms * in.sample_rate_hz() / 1000.0));
    std::vector<double> peak(n, 0.0);
    for (int c = 0; c < in.num_channels(); ++c) {
      auto x = in.channel(c);
      for (size_t i = 0; i < n; ++i)
        peak[i] = std::max(peak[i], std::abs(x[i]));
    }
    // Sliding maximum over [i, i + look] with a monotone deque.
    std::vector<double> window_max(n);
    std::deque<size_t> q;
    size_t next = 0;
    for (size_t i = 0; i < n; ++i) {
      const size_t end = std::min(n - 1, i + look);
      while (next <= end) {
        while (!q.empty() && peak[q.back()] <= peak[next]) q.pop_back();
        q.push_back(next++);
      }
      while (q.front() < i) q.pop_front();
      window_max[i] = peak[q.front()];
    }
    AudioBuffer out = in;
    for (int c = 0; c < out.num_channels(); ++c) {
      auto y = out.mutable_channel(c);
      for (size_t i = 0; i < n; ++i) {
        if (window_max[i] > threshold) y[i] *= threshold / window_max[i];
      }
    }
    return out;
  };
}

AudioProcessor GlobalPeakNormalizer(double target) {
  return [target](const AudioBuffer& in) -> absl::StatusOr<AudioBuffer> {
    AudioBuffer out = in;
    const double peak = in.MaxAbs();
    if (peak > 0.0) out.Scale(target / peak);
    return out;
  };
}

}  // namespace cadenza
