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

#include "cadenza/fft.h"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace cadenza {
namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

std::mutex& PlanMutex() {
  static std::mutex mu;
  return mu;
}

// Plans live for the lifetime of the process.
PlanPair GetPlans(size_t n) {
  static auto* cache = new std::map<size_t, PlanPair>();
  std::lock_guard<std::mutex> lock(PlanMutex());
  auto it = cache->find(n);
  if (it != cache->end()) return it->second;
  std::vector<double> real(n);
  std::vector<fftw_complex> spec(n / 2 + 1);
  const int size = static_cast<int>(n);
  PlanPair plans;
  plans.forward = fftw_plan_dft_r2c_1d(size, real.data(), spec.data(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans.inverse = fftw_plan_dft_c2r_1d(
      size, spec.data(), real.data(),
      FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
  cache->emplace(n, plans);
  return plans;
}

}  // namespace

RealFft::RealFft(size_t size) : size_(size) {
  PlanPair plans = GetPlans(size);
  forward_plan_ = plans.forward;
  inverse_plan_ = plans.inverse;
}

void RealFft::Forward(std::span<const double> in,
                      std::span<std::complex<double>> out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_),
                       const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::Inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(
                           const_cast<std::complex<double>*>(in.data())),
                       out.data());
}

size_t NextPowerOfTwo(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace cadenza
