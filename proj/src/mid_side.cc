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

#include "cadenza/mid_side.h"

#include <cmath>
#include <vector>

#include "absl/strings/str_cat.h"

namespace cadenza {
namespace {

// Half of a 1/3-octave transition on either side of an edge.
const double kHalfTransition = std::pow(2.0, 1.0 / 6.0);

}  // namespace

absl::StatusOr<MidSide> MidSideSplit(const AudioBuffer& stereo) {
  if (stereo.num_channels() != 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("mid/side split needs stereo input, got ",
                     stereo.num_channels(), " channel(s)"));
  }
  const size_t n = stereo.num_frames();
  std::vector<double> mid(n);
  std::vector<double> side(n);
  auto l = stereo.channel(0);
  auto r = stereo.channel(1);
  for (size_t i = 0; i < n; ++i) {
    mid[i] = (l[i] + r[i]) / 2.0;
    side[i] = (l[i] - r[i]) / 2.0;
  }
  auto m = AudioBuffer::Create(stereo.sample_rate_hz(), {std::move(mid)});
  if (!m.ok()) return m.status();
  auto s = AudioBuffer::Create(stereo.sample_rate_hz(), {std::move(side)});
  if (!s.ok()) return s.status();
  return MidSide{*std::move(m), *std::move(s)};
}

absl::StatusOr<AudioBuffer> MidSideEq(const AudioBuffer& stereo,
                                      const FirFilter& mid_filter,
                                      const FirFilter& side_filter) {
  auto ms = MidSideSplit(stereo);
  if (!ms.ok()) return ms.status();
  auto g = ApplyFir(ms->mid, mid_filter, /*compensate_delay=*/true);
  if (!g.ok()) return g.status();
  auto h = ApplyFir(ms->side, side_filter, /*compensate_delay=*/true);
  if (!h.ok()) return h.status();
  const size_t n = stereo.num_frames();
  std::vector<double> left(n);
  std::vector<double> right(n);
  auto gm = g->channel(0);
  auto hs = h->channel(0);
  for (size_t i = 0; i < n; ++i) {
    left[i] = gm[i] + hs[i];
    right[i] = gm[i] - hs[i];
  }
  return AudioBuffer::Create(stereo.sample_rate_hz(),
                             {std::move(left), std::move(right)});
}

absl::StatusOr<MidSideFilters> DefaultE17Filters(int sample_rate_hz,
                                                 int num_taps) {
  const std::vector<GainPoint> mid_target = {
      {2000.0 / kHalfTransition, -2.0},
      {2000.0 * kHalfTransition, 0.0},
  };
  const std::vector<GainPoint> side_target = {
      {2000.0 / kHalfTransition, 0.0},
      {2000.0 * kHalfTransition, 3.0},
      {6000.0 / kHalfTransition, 3.0},
      {6000.0 * kHalfTransition, 0.0},
  };
  auto mid = DesignFrequencySampledFir(mid_target, num_taps, sample_rate_hz);
  if (!mid.ok()) return mid.status();
  auto side = DesignFrequencySampledFir(side_target, num_taps, sample_rate_hz);
  if (!side.ok()) return side.status();
  return MidSideFilters{*std::move(mid), *std::move(side)};
}

}  // namespace cadenza
