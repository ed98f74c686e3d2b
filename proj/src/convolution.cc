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

#include "cadenza/convolution.h"

#include <algorithm>
#include <complex>

#include "cadenza/fft.h"

namespace cadenza {
namespace {

std::vector<double> DirectConvolve(std::span<const double> x,
                                   std::span<const double> ir) {
  std::vector<double> y(x.size() + ir.size() - 1, 0.0);
  for (size_t k = 0; k < ir.size(); ++k) {
    const double h = ir[k];
    if (h == 0.0) continue;
    double* dst = y.data() + k;
    for (size_t i = 0; i < x.size(); ++i) dst[i] += h * x[i];
  }
  return y;
}

std::vector<double> OverlapAddConvolve(std::span<const double> x,
                                       std::span<const double> ir) {
  const size_t out_size = x.size() + ir.size() - 1;
  const size_t fft_size = std::max<size_t>(256, NextPowerOfTwo(4 * ir.size()));
  const size_t block = fft_size - ir.size() + 1;
  const RealFft fft(fft_size);
  const size_t bins = fft.num_bins();
  const double norm = 1.0 / static_cast<double>(fft_size);

  std::vector<double> frame(fft_size, 0.0);
  std::copy(ir.begin(), ir.end(), frame.begin());
  std::vector<std::complex<double>> ir_spec(bins);
  fft.Forward(frame, ir_spec);

  std::vector<std::complex<double>> spec(bins);
  std::vector<double> y(out_size, 0.0);
  for (size_t start = 0; start < x.size(); start += block) {
    const size_t len = std::min(block, x.size() - start);
    std::fill(frame.begin(), frame.end(), 0.0);
    std::copy_n(x.begin() + start, len, frame.begin());
    fft.Forward(frame, spec);
    for (size_t k = 0; k < bins; ++k) spec[k] *= ir_spec[k];
    fft.Inverse(spec, frame);
    const size_t n = std::min(fft_size, out_size - start);
    for (size_t i = 0; i < n; ++i) y[start + i] += frame[i] * norm;
  }
  return y;
}

}  // namespace

std::vector<double> ConvolveSignals(std::span<const double> x,
                                    std::span<const double> ir,
                                    ConvolutionMethod method) {
  if (x.empty() || ir.empty()) return {};
  if (method == ConvolutionMethod::kAuto) {
    method = (ir.size() <= kDirectConvolutionMaxTaps ||
              x.size() <= kDirectConvolutionMaxTaps)
                 ? ConvolutionMethod::kDirect
                 : ConvolutionMethod::kOverlapAdd;
  }
  if (method == ConvolutionMethod::kDirect) return DirectConvolve(x, ir);
  return OverlapAddConvolve(x, ir);
}

absl::StatusOr<AudioBuffer> Convolve(const AudioBuffer& x,
                                     std::span<const double> ir,
                                     ConvolutionMethod method) {
  if (ir.empty()) {
    return absl::InvalidArgumentError("impulse response is empty");
  }
  std::vector<std::vector<double>> out;
  for (int c = 0; c < x.num_channels(); ++c) {
    if (x.num_frames() == 0) {
      out.emplace_back(ir.size() - 1, 0.0);
    } else {
      out.push_back(ConvolveSignals(x.channel(c), ir, method));
    }
  }
  return AudioBuffer::Create(x.sample_rate_hz(), std::move(out));
}

}  // namespace cadenza
