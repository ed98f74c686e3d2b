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

#ifndef CADENZA_CONVOLUTION_H_
#define CADENZA_CONVOLUTION_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "cadenza/audio_buffer.h"

namespace cadenza {

enum class ConvolutionMethod {
  kAuto,
  kDirect,
  kOverlapAdd,
};

// Impulse responses up to this length use direct form under kAuto.
inline constexpr size_t kDirectConvolutionMaxTaps = 48;

// Full linear convolution, size x.size() + ir.size() - 1. Either input may be
// empty, in which case the result is empty.
std::vector<double> ConvolveSignals(
    std::span<const double> x, std::span<const double> ir,
    ConvolutionMethod method = ConvolutionMethod::kAuto);

// Convolves every channel of `x` with the mono impulse response `ir`.
absl::StatusOr<AudioBuffer> Convolve(
    const AudioBuffer& x, std::span<const double> ir,
    ConvolutionMethod method = ConvolutionMethod::kAuto);

}  // namespace cadenza

#endif  // CADENZA_CONVOLUTION_H_
