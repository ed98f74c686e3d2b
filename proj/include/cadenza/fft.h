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

#ifndef CADENZA_FFT_H_
#define CADENZA_FFT_H_

#include <complex>
#include <cstddef>
#include <span>

namespace cadenza {

// Real-to-complex transform of a fixed size backed by FFTW. Plans are shared
// process-wide and created under a lock; Forward/Inverse may be called from
// any number of threads concurrently.
class RealFft {
 public:
  explicit RealFft(size_t size);

  size_t size() const { return size_; }
  size_t num_bins() const { return size_ / 2 + 1; }

  // `in` has size() samples, `out` has num_bins() values.
  void Forward(std::span<const double> in,
               std::span<std::complex<double>> out) const;

  // Unnormalized inverse: Inverse(Forward(x)) == size() * x.
  void Inverse(std::span<const std::complex<double>> in,
               std::span<double> out) const;

 private:
  size_t size_;
  void* forward_plan_;
  void* inverse_plan_;
};

size_t NextPowerOfTwo(size_t n);

}  // namespace cadenza

#endif  // CADENZA_FFT_H_
