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

#include "cadenza/prescription.h"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

namespace cadenza {
namespace {

constexpr int kFs = 44100;

double Rms(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

AudioBuffer Sine(double freq, double amp, size_t n, int fs = kFs) {
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i) {
    x[i] = amp * std::sin(2.0 * std::numbers::pi * freq * i / fs);
  }
  return *AudioBuffer::Create(fs, {x});
}

TEST(NalrTest, HandEvaluatedGains) {
  const PrescriptionGains zero = NalrInsertionGains(Audiogram::Flat(0));
  EXPECT_DOUBLE_EQ(zero.insertion_gain_db[2], 1.0);
  const PrescriptionGains forty = NalrInsertionGains(Audiogram::Flat(40));
  EXPECT_NEAR(forty.insertion_gain_db[2], 19.4, 1e-12);
  EXPECT_NEAR(forty.insertion_gain_db[0], 1.4, 1e-12);
  const PrescriptionGains twenty = NalrInsertionGains(Audiogram::Flat(20));
  for (size_t i = 0; i < 8; ++i) {
    EXPECT_NEAR(forty.insertion_gain_db[i] - twenty.insertion_gain_db[i], 9.2,
                1e-12);
  }
}

TEST(NalrTest, NegativeGainsArePreserved) {
  const PrescriptionGains zero = NalrInsertionGains(Audiogram::Flat(0));
  EXPECT_DOUBLE_EQ(zero.insertion_gain_db[0], -17.0);
  EXPECT_DOUBLE_EQ(zero.insertion_gain_db[1], -8.0);
}

TEST(NalrTest, GainsAreAffineInTheAudiogram) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> level(0, 80);
  for (int t = 0; t < 50; ++t) {
    Audiogram::Levels a{}, b{}, mid{};
    for (size_t i = 0; i < 8; ++i) {
      a[i] = level(rng);
      b[i] = level(rng);
      mid[i] = 0.5 * (a[i] + b[i]);
    }
    const auto ga = NalrInsertionGains(*Audiogram::Create(a));
    const auto gb = NalrInsertionGains(*Audiogram::Create(b));
    const auto gm = NalrInsertionGains(*Audiogram::Create(mid));
    for (size_t i = 0; i < 8; ++i) {
      EXPECT_NEAR(gm.insertion_gain_db[i],
                  0.5 * (ga.insertion_gain_db[i] + gb.insertion_gain_db[i]),
                  1e-12);
    }
  }
}

TEST(FirDesignTest, ZeroGainTargetIsFlat) {
  PrescriptionGains flat;
  auto filter = DesignPrescriptionFilter(flat, kDefaultNalrTaps, kFs);
  ASSERT_TRUE(filter.ok());
  for (double f = 250; f <= 8000; f *= std::pow(2.0, 1.0 / 12.0)) {
    EXPECT_NEAR(filter->MagnitudeDb(f), 0.0, 0.1) << f;
  }
}

TEST(FirDesignTest, FlatFortyAudiogramHitsHandValues) {
  auto filter = DesignNalrFilter(Audiogram::Flat(40), 221, kFs);
  ASSERT_TRUE(filter.ok());
  EXPECT_NEAR(filter->MagnitudeDb(1000), 19.4, 1.0);
  EXPECT_NEAR(filter->MagnitudeDb(250), 1.4, 1.0);
  EXPECT_EQ(filter->group_delay_samples(), 110u);
  EXPECT_EQ(filter->taps().size(), 221u);
}

TEST(FirDesignTest, RandomAudiogramFidelityAndSymmetry) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> level(0, 80);
  for (int t = 0; t < 20; ++t) {
    Audiogram::Levels l{};
    for (auto& v : l) v = level(rng);
    const auto gains = NalrInsertionGains(*Audiogram::Create(l));
    auto filter = DesignPrescriptionFilter(gains, 221, kFs);
    ASSERT_TRUE(filter.ok());
    for (size_t i = 0; i < 8; ++i) {
      EXPECT_NEAR(filter->MagnitudeDb(kAudiometricFrequenciesHz[i]),
                  gains.insertion_gain_db[i], 1.0);
    }
    const auto& h = filter->taps();
    for (size_t i = 0; i < h.size(); ++i) {
      EXPECT_LE(std::abs(h[i] - h[h.size() - 1 - i]), 1e-12);
    }
  }
}

TEST(FirDesignTest, SixteenKilohertzIgnoresPointsAboveNyquist) {
  auto filter = DesignNalrFilter(Audiogram::Flat(50), 221, 16000);
  ASSERT_TRUE(filter.ok());
  const auto gains = NalrInsertionGains(Audiogram::Flat(50));
  for (size_t i = 0; i < 8; ++i) {
    if (kAudiometricFrequenciesHz[i] >= 8000) continue;
    EXPECT_NEAR(filter->MagnitudeDb(kAudiometricFrequenciesHz[i]),
                gains.insertion_gain_db[i], 1.0);
  }
}

TEST(FirDesignTest, ParameterErrors) {
  PrescriptionGains g;
  EXPECT_FALSE(DesignPrescriptionFilter(g, 220, kFs).ok());
  EXPECT_FALSE(DesignPrescriptionFilter(g, 61, kFs).ok());
  EXPECT_FALSE(DesignPrescriptionFilter(g, 221, 8000).ok());
  EXPECT_FALSE(FirFilter::Create({1.0, 0.5}, kFs).ok());
  EXPECT_FALSE(FirFilter::Create({1.0, 0.5, 0.9}, kFs).ok());
}

TEST(ApplyPrescriptionTest, ImpulseGivesCenteredTaps) {
  auto filter = *DesignNalrFilter(Audiogram::Flat(30), 221, kFs);
  std::vector<double> x(1000, 0.0);
  x[300] = 1.0;
  auto y = ApplyPrescription(*AudioBuffer::Create(kFs, {x}), filter, true);
  ASSERT_TRUE(y.ok());
  const auto& h = filter.taps();
  for (size_t k = 0; k < h.size(); ++k) {
    EXPECT_NEAR(y->channel(0)[300 - 110 + k], h[k], 1e-12);
  }
  EXPECT_EQ(y->num_frames(), 1000u);
}

TEST(ApplyPrescriptionTest, SineIsAmplifiedByPrescribedGain) {
  auto filter = *DesignNalrFilter(Audiogram::Flat(40), 221, kFs);
  const AudioBuffer x = Sine(1000, 0.01, kFs);
  auto y = ApplyPrescription(x, filter, true);
  ASSERT_TRUE(y.ok());
  // Skip the edges where the filter sees zero padding.
  const double in_rms = Rms(x.channel(0).subspan(2000, 40000));
  const double out_rms = Rms(y->channel(0).subspan(2000, 40000));
  EXPECT_NEAR(out_rms / in_rms, std::pow(10.0, 19.4 / 20.0),
              0.02 * std::pow(10.0, 19.4 / 20.0));
}

TEST(ApplyPrescriptionTest, ZeroInZeroOutAndRateMismatch) {
  auto filter = *DesignNalrFilter(Audiogram::Flat(40), 221, kFs);
  auto y = ApplyPrescription(AudioBuffer::Zeros(kFs, 2, 500), filter, true);
  ASSERT_TRUE(y.ok());
  EXPECT_EQ(y->MaxAbs(), 0.0);
  EXPECT_FALSE(
      ApplyPrescription(AudioBuffer::Zeros(48000, 1, 10), filter, true).ok());
}

TEST(ApplyPrescriptionTest, IsLinear) {
  auto filter = *DesignNalrFilter(Audiogram::Flat(55), 221, kFs);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0, 0.1);
  std::vector<double> a(3000), b(3000), mix(3000);
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = n(rng);
    b[i] = n(rng);
    mix[i] = 0.7 * a[i] - 1.3 * b[i];
  }
  auto fa = *ApplyPrescription(*AudioBuffer::Create(kFs, {a}), filter, true);
  auto fb = *ApplyPrescription(*AudioBuffer::Create(kFs, {b}), filter, true);
  auto fm = *ApplyPrescription(*AudioBuffer::Create(kFs, {mix}), filter, true);
  double err = 0.0, ref = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double expected = 0.7 * fa.channel(0)[i] - 1.3 * fb.channel(0)[i];
    err = std::max(err, std::abs(fm.channel(0)[i] - expected));
    ref = std::max(ref, std::abs(expected));
  }
  EXPECT_LE(err / ref, 1e-9);
}

TEST(ApplyPrescriptionTest, EarsAreAmplifiedIndependently) {
  const Listener listener{"l", Audiogram::Flat(0), Audiogram::Flat(60)};
  const Listener swapped{"s", Audiogram::Flat(60), Audiogram::Flat(0)};
  const AudioBuffer tone = Sine(2000, 0.01, 20000);
  auto stereo = *MakeStereo(tone, tone);
  auto a = *AmplifyForListener(stereo, listener);
  auto b = *AmplifyForListener(stereo, swapped);
  for (size_t i = 0; i < stereo.num_frames(); ++i) {
    EXPECT_DOUBLE_EQ(a.channel(0)[i], b.channel(1)[i]);
    EXPECT_DOUBLE_EQ(a.channel(1)[i], b.channel(0)[i]);
  }
}

}  // namespace
}  // namespace cadenza
