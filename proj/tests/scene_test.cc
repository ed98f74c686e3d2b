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

#include "cadenza/scene.h"

#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "boost/math/distributions/chi_squared.hpp"
#include "cadenza/fixtures.h"
#include "cadenza/hrir.h"
#include "cadenza/rng.h"
#include "cadenza/scene_dataset.h"
#include "cadenza/wav_io.h"
#include "gtest/gtest.h"

namespace cadenza {
namespace {

constexpr int kFs = 8000;

AudioBuffer Sine(double freq, double amp, size_t n, int fs = kFs) {
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i) {
    x[i] = amp * std::sin(2.0 * std::numbers::pi * freq * i / fs);
  }
  return *AudioBuffer::Create(fs, {x, x});
}

StemSet FourSines(double dur_s, int fs = kFs) {
  const size_t n = static_cast<size_t>(dur_s * fs);
  return *StemSet::Create({Sine(220, 0.1, n, fs), Sine(330, 0.1, n, fs),
                           Sine(110, 0.1, n, fs), Sine(550, 0.1, n, fs)});
}

StemSet WithGap(const StemSet& s, Stem stem, double from_s, double to_s) {
  std::array<AudioBuffer, 4> stems = s.stems();
  AudioBuffer& b = stems[static_cast<size_t>(stem)];
  const int fs = b.sample_rate_hz();
  for (int c = 0; c < 2; ++c) {
    auto ch = b.mutable_channel(c);
    for (size_t i = from_s * fs; i < to_s * fs && i < ch.size(); ++i) {
      ch[i] = 0.0;
    }
  }
  return *StemSet::Create(std::move(stems));
}

// Upper critical value of the chi-square distribution.
double ChiSquareCritical(int df, double alpha) {
  return boost::math::quantile(
      boost::math::complement(boost::math::chi_squared(df), alpha));
}

double ChiSquareStatistic(const std::vector<int>& counts) {
  double total = 0.0;
  for (int c : counts) total += c;
  const double expected = total / counts.size();
  double x2 = 0.0;
  for (int c : counts) x2 += (c - expected) * (c - expected) / expected;
  return x2;
}

TEST(SegmentTrackTest, ThirtyFiveSecondsGivesThreeWindows) {
  auto index = SegmentTrack("t", FourSines(35.0), 10.0);
  ASSERT_TRUE(index.ok()) << index.status();
  ASSERT_EQ(index->segments.size(), 3u);
  EXPECT_DOUBLE_EQ(index->segments[0].start_s, 0.0);
  EXPECT_DOUBLE_EQ(index->segments[1].start_s, 10.0);
  EXPECT_DOUBLE_EQ(index->segments[2].start_s, 20.0);
  for (const Segment& s : index->segments) EXPECT_TRUE(s.eligible());
}

TEST(SegmentTrackTest, SilentBassMakesWindowIneligible) {
  auto index =
      SegmentTrack("t", WithGap(FourSines(20.0), Stem::kBass, 0, 10), 10.0);
  ASSERT_TRUE(index.ok());
  EXPECT_FALSE(index->segments[0].eligible());
  EXPECT_FALSE(index->segments[0].active[static_cast<size_t>(Stem::kBass)]);
  EXPECT_TRUE(index->segments[1].eligible());
}

TEST(SegmentTrackTest, GatedStemOnlyAffectsItsWindow) {
  auto index =
      SegmentTrack("t", WithGap(FourSines(30.0), Stem::kOther, 10, 20), 10.0);
  ASSERT_TRUE(index.ok());
  EXPECT_TRUE(index->segments[0].eligible());
  EXPECT_FALSE(index->segments[1].eligible());
  EXPECT_TRUE(index->segments[2].eligible());
  EXPECT_EQ(index->EligibleStarts(), (std::vector<double>{0.0, 20.0}));
}

TEST(SegmentTrackTest, QuietButAboveFloorIsActive) {
  // -60 dBFS floor: a sine at amplitude 0.01 has RMS about -43 dBFS.
  const size_t n = 10 * kFs;
  auto stems = StemSet::Create({Sine(220, 0.01, n), Sine(330, 0.1, n),
                                Sine(110, 0.1, n), Sine(550, 0.1, n)});
  auto index = SegmentTrack("t", *stems, 10.0);
  EXPECT_TRUE(index->segments[0].eligible());
  auto strict = SegmentTrack("t", *stems, 10.0, -40.0);
  EXPECT_FALSE(strict->segments[0].eligible());
}

TEST(SegmentTrackTest, ShortTrackIsAnError) {
  auto index = SegmentTrack("short", FourSines(9.0), 10.0);
  EXPECT_FALSE(index.ok());
  EXPECT_NE(index.status().message().find("short"), std::string::npos);
  EXPECT_FALSE(SegmentTrack("t", FourSines(9.0), 0.0).ok());
}

TEST(SegmentTrackTest, WindowsAreConsecutive) {
  auto index = SegmentTrack("t", FourSines(47.0), 10.0);
  ASSERT_EQ(index->segments.size(), 4u);
  for (size_t i = 1; i < index->segments.size(); ++i) {
    EXPECT_DOUBLE_EQ(
        index->segments[i].start_s - index->segments[i - 1].start_s, 10.0);
  }
}

class SampleSceneTest : public ::testing::Test {
 protected:
  SampleSceneTest() {
    for (int i = 0; i < 53; ++i) listeners_.push_back("L" + std::to_string(i));
    for (int i = 0; i < 16; ++i) subjects_.push_back("H" + std::to_string(i));
    index_ = *SegmentTrack("track", FourSines(60.0), 10.0);
  }

  ScenePools Pools(int per_scene) const {
    return {listeners_, subjects_, per_scene};
  }

  std::vector<std::string> listeners_;
  std::vector<std::string> subjects_;
  SegmentIndex index_;
};

TEST_F(SampleSceneTest, SameSeedSameScene) {
  auto a = SampleScene(42, "S1", index_, Pools(20), ChallengeMode::kIcassp24);
  auto b = SampleScene(42, "S1", index_, Pools(20), ChallengeMode::kIcassp24);
  ASSERT_TRUE(a.ok()) << a.status();
  EXPECT_EQ(*a, *b);
  EXPECT_EQ(a->rng_seed, 42u);
}

TEST_F(SampleSceneTest, Icassp24ScenesSatisfyInvariants) {
  for (uint64_t seed = 0; seed < 500; ++seed) {
    auto s =
        SampleScene(seed, "S", index_, Pools(20), ChallengeMode::kIcassp24);
    ASSERT_TRUE(s.ok());
    EXPECT_TRUE(ValidateScene(*s, ChallengeMode::kIcassp24).ok());
    EXPECT_EQ(s->segment_dur_s, 10.0);
    EXPECT_EQ(s->listener_ids.size(), 20u);
    std::set<std::string> unique(s->listener_ids.begin(),
                                 s->listener_ids.end());
    EXPECT_EQ(unique.size(), 20u);
    EXPECT_EQ(std::fmod(s->segment_start_s, 10.0), 0.0);
  }
}

TEST_F(SampleSceneTest, Cad1ScenesHaveNoRenderingOrGains) {
  auto s = SampleScene(7, "S", index_, Pools(0), ChallengeMode::kCad1);
  ASSERT_TRUE(s.ok());
  EXPECT_FALSE(s->hrtf_subject.has_value());
  EXPECT_FALSE(s->angle_left_deg.has_value());
  EXPECT_EQ(s->gains.NumAltered(), 0);
  EXPECT_EQ(s->segment_dur_s, 30.0);
  EXPECT_EQ(s->listener_ids.size(), 53u);
  EXPECT_TRUE(ValidateScene(*s, ChallengeMode::kCad1).ok());
}

TEST_F(SampleSceneTest, AnglePairsAreUniform) {
  // 9000 draws: each pair expected 1000, binomial sigma sqrt(9000/9*8/9).
  std::map<std::pair<double, double>, int> counts;
  for (uint64_t i = 0; i < 9000; ++i) {
    auto s = SampleScene(DeriveSeed(123, i), "S", index_, Pools(1),
                         ChallengeMode::kIcassp24);
    ++counts[{*s->angle_left_deg, *s->angle_right_deg}];
  }
  ASSERT_EQ(counts.size(), 9u);
  const double sigma = std::sqrt(9000.0 * (1.0 / 9) * (8.0 / 9));
  for (const auto& [pair, c] : counts) {
    EXPECT_NEAR(c, 1000.0, 3 * sigma) << pair.first << "," << pair.second;
  }
}

TEST_F(SampleSceneTest, MarginalsPassChiSquare) {
  std::map<std::pair<double, double>, int> angles;
  std::vector<int> altered(3, 0);
  std::map<double, int> gains;
  for (uint64_t i = 0; i < 10000; ++i) {
    auto s = SampleScene(DeriveSeed(99, i), "S", index_, Pools(1),
                         ChallengeMode::kIcassp24);
    ++angles[{*s->angle_left_deg, *s->angle_right_deg}];
    ++altered[s->gains.NumAltered() - 1];
    for (double g : s->gains.db) {
      if (g != 0.0) ++gains[g];
    }
  }
  std::vector<int> a;
  for (auto& [k, v] : angles) a.push_back(v);
  std::vector<int> g;
  for (auto& [k, v] : gains) g.push_back(v);
  ASSERT_EQ(a.size(), 9u);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_LT(ChiSquareStatistic(a), ChiSquareCritical(8, 0.01));
  EXPECT_LT(ChiSquareStatistic(altered), ChiSquareCritical(2, 0.01));
  EXPECT_LT(ChiSquareStatistic(g), ChiSquareCritical(5, 0.01));
}

TEST_F(SampleSceneTest, AlteredStemsAreDistinctAndEachStemEquallyLikely) {
  std::vector<int> per_stem(4, 0);
  for (uint64_t i = 0; i < 4000; ++i) {
    auto s = SampleScene(DeriveSeed(5, i), "S", index_, Pools(1),
                         ChallengeMode::kIcassp24);
    for (size_t k = 0; k < 4; ++k) per_stem[k] += s->gains.db[k] != 0.0;
  }
  EXPECT_LT(ChiSquareStatistic(per_stem), ChiSquareCritical(3, 0.01));
}

TEST_F(SampleSceneTest, OnlyEligibleSegmentsAreChosen) {
  auto gated =
      *SegmentTrack("t", WithGap(FourSines(40.0), Stem::kDrums, 10, 30), 10.0);
  std::set<double> seen;
  for (uint64_t i = 0; i < 200; ++i) {
    seen.insert(SampleScene(i, "S", gated, Pools(1), ChallengeMode::kIcassp24)
                    ->segment_start_s);
  }
  EXPECT_EQ(seen, (std::set<double>{0.0, 30.0}));
}

TEST_F(SampleSceneTest, Errors) {
  auto silent =
      *SegmentTrack("t", WithGap(FourSines(10.0), Stem::kVocals, 0, 10), 10.0);
  EXPECT_FALSE(
      SampleScene(1, "S", silent, Pools(1), ChallengeMode::kIcassp24).ok());
  ScenePools empty{{}, subjects_, 0};
  EXPECT_FALSE(SampleScene(1, "S", index_, empty, ChallengeMode::kCad1).ok());
  ScenePools no_hrtf{listeners_, {}, 1};
  EXPECT_FALSE(
      SampleScene(1, "S", index_, no_hrtf, ChallengeMode::kIcassp24).ok());
  EXPECT_TRUE(SampleScene(1, "S", index_, no_hrtf, ChallengeMode::kCad1).ok());
  EXPECT_FALSE(
      SampleScene(1, "S", index_, Pools(54), ChallengeMode::kCad1).ok());
}

TEST_F(SampleSceneTest, ManifestRoundTrip) {
  std::vector<SceneSpec> scenes;
  for (uint64_t i = 0; i < 20; ++i) {
    scenes.push_back(*SampleScene(
        DeriveSeed(1, i), "S" + std::to_string(i), index_, Pools(3),
        i % 2 ? ChallengeMode::kCad1 : ChallengeMode::kIcassp24));
  }
  scenes[0].segment_start_s = 12.345678901234567;
  scenes[1].rng_seed = 0xFFFFFFFFFFFFFFFFULL;
  const std::string text = SerializeScenes(scenes);
  auto back = ParseScenes(text);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, scenes);
  EXPECT_EQ(SerializeScenes(*back), text);
  EXPECT_TRUE(ParseScenes("[]")->empty());
  EXPECT_FALSE(ParseScenes("{}").ok());
  EXPECT_FALSE(ParseScenes("[{\"scene_id\": \"x\"}]").ok());
}

TEST(ValidateSceneTest, RejectsOffGridValues) {
  SceneSpec s;
  s.scene_id = "S";
  s.segment_dur_s = 10.0;
  s.hrtf_subject = "H";
  s.angle_left_deg = 30.0;
  s.angle_right_deg = -30.0;
  s.gains.db = {3, 0, 0, 0};
  s.listener_ids = {"L"};
  EXPECT_TRUE(ValidateScene(s, ChallengeMode::kIcassp24).ok());
  SceneSpec t = s;
  t.angle_right_deg = 30.0;
  EXPECT_FALSE(ValidateScene(t, ChallengeMode::kIcassp24).ok());
  t = s;
  t.gains.db = {4, 0, 0, 0};
  EXPECT_FALSE(ValidateScene(t, ChallengeMode::kIcassp24).ok());
  t = s;
  t.gains.db = {3, 3, 3, 3};
  EXPECT_FALSE(ValidateScene(t, ChallengeMode::kIcassp24).ok());
  t = s;
  t.gains.db = {0, 0, 0, 0};
  EXPECT_FALSE(ValidateScene(t, ChallengeMode::kIcassp24).ok());
  t = s;
  t.segment_dur_s = 30.0;
  EXPECT_FALSE(ValidateScene(t, ChallengeMode::kIcassp24).ok());
  EXPECT_FALSE(ValidateScene(s, ChallengeMode::kCad1).ok());
}

// HRIR fixtures.

std::vector<double> Delta(size_t n, size_t at, double gain = 1.0) {
  std::vector<double> x(n, 0.0);
  x[at] = gain;
  return x;
}

HrirSet MakeSet(std::vector<double> ll, std::vector<double> lr,
                std::vector<double> rl, std::vector<double> rr) {
  // ll: left speaker -> left mic, lr: left speaker -> right mic, etc.
  std::vector<HrirSet::Entry> entries;
  for (double az : kSpeakerAzimuthsDeg) {
    entries.push_back({SpeakerSide::kLeft, az, {ll, lr}});
    entries.push_back({SpeakerSide::kRight, -az, {rl, rr}});
  }
  return *HrirSet::Create("fixture", kFs, std::move(entries));
}

AudioBuffer RandomProgram(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<double> l(n), r(n);
  for (size_t i = 0; i < n; ++i) {
    l[i] = u(rng);
    r[i] = u(rng);
  }
  return *AudioBuffer::Create(kFs, {l, r});
}

TEST(RenderAtEarsTest, IdealIsolationIsIdentity) {
  const HrirSet h =
      MakeSet(Delta(8, 0), Delta(8, 0, 0.0), Delta(8, 0, 0.0), Delta(8, 0));
  const AudioBuffer x = RandomProgram(500, 1);
  auto y = RenderAtEars(x, h, 30.0, -30.0);
  ASSERT_TRUE(y.ok()) << y.status();
  ASSERT_EQ(y->num_frames(), x.num_frames());
  for (int c = 0; c < 2; ++c) {
    for (size_t i = 0; i < x.num_frames(); ++i) {
      EXPECT_DOUBLE_EQ(y->channel(c)[i], x.channel(c)[i]);
    }
  }
}

TEST(RenderAtEarsTest, SymmetricHeadWithMonoProgramGivesEqualMics) {
  const auto direct = Delta(16, 2, 0.9);
  const auto cross = Delta(16, 9, 0.4);
  const HrirSet h = MakeSet(direct, cross, cross, direct);
  const AudioBuffer mono = RandomProgram(300, 2).ChannelAsMono(0);
  const AudioBuffer x = *MakeStereo(mono, mono);
  auto y = RenderAtEars(x, h, 22.5, -37.5);
  for (size_t i = 0; i < x.num_frames(); ++i) {
    EXPECT_DOUBLE_EQ(y->channel(0)[i], y->channel(1)[i]);
  }
}

TEST(RenderAtEarsTest, CrosstalkSuperposition) {
  const HrirSet h = MakeSet(Delta(32, 0), Delta(32, 0, 0.0), Delta(32, 20, 0.5),
                            Delta(32, 0));
  const AudioBuffer x = RandomProgram(200, 3);
  auto y = RenderAtEars(x, h, 37.5, -22.5);
  for (size_t i = 0; i < x.num_frames(); ++i) {
    const double expect =
        x.channel(0)[i] + (i >= 20 ? 0.5 * x.channel(1)[i - 20] : 0.0);
    EXPECT_NEAR(y->channel(0)[i], expect, 1e-12);
    EXPECT_NEAR(y->channel(1)[i], x.channel(1)[i], 1e-12);
  }
}

TEST(RenderAtEarsTest, LinearInProgram) {
  const HrirSet h = MakeSyntheticHrirs(kFs, 1, 4)[0];
  const AudioBuffer a = RandomProgram(400, 5);
  const AudioBuffer b = RandomProgram(400, 6);
  std::vector<std::vector<double>> sum(2, std::vector<double>(400));
  for (int c = 0; c < 2; ++c) {
    for (size_t i = 0; i < 400; ++i) {
      sum[c][i] = 2.0 * a.channel(c)[i] - 3.0 * b.channel(c)[i];
    }
  }
  const AudioBuffer ab = *AudioBuffer::Create(kFs, sum);
  auto ya = RenderAtEars(a, h, 30, -30);
  auto yb = RenderAtEars(b, h, 30, -30);
  auto yab = RenderAtEars(ab, h, 30, -30);
  for (int c = 0; c < 2; ++c) {
    for (size_t i = 0; i < 400; ++i) {
      EXPECT_NEAR(yab->channel(c)[i],
                  2.0 * ya->channel(c)[i] - 3.0 * yb->channel(c)[i], 1e-12);
    }
  }
}

TEST(RenderAtEarsTest, MissingAngleListsAvailableAzimuths) {
  const HrirSet h = MakeSyntheticHrirs(kFs, 1, 4)[0];
  auto y = RenderAtEars(RandomProgram(10, 1), h, 45.0, -30.0);
  ASSERT_FALSE(y.ok());
  EXPECT_NE(y.status().message().find("22.5"), std::string::npos);
  EXPECT_NE(y.status().message().find("37.5"), std::string::npos);
  auto wrong_rate = AudioBuffer::Zeros(16000, 2, 10);
  EXPECT_FALSE(RenderAtEars(wrong_rate, h, 30, -30).ok());
  EXPECT_FALSE(RenderAtEars(AudioBuffer::Zeros(kFs, 1, 10), h, 30, -30).ok());
}

TEST(HrirSetTest, InvariantsEnforced) {
  const auto d = Delta(8, 0);
  // Left side covers 30 degrees but right side does not.
  EXPECT_FALSE(HrirSet::Create("x", kFs,
                               {{SpeakerSide::kLeft, 30.0, {d, d}},
                                {SpeakerSide::kRight, -22.5, {d, d}}})
                   .ok());
  // Lengths more than 2x apart.
  EXPECT_FALSE(
      HrirSet::Create("x", kFs,
                      {{SpeakerSide::kLeft, 30.0, {d, d}},
                       {SpeakerSide::kRight, -30.0, {Delta(17, 0), d}}})
          .ok());
  EXPECT_FALSE(HrirSet::Create("x", kFs,
                               {{SpeakerSide::kLeft, 30.0, {d, {}}},
                                {SpeakerSide::kRight, -30.0, {d, d}}})
                   .ok());
  EXPECT_FALSE(HrirSet::Create("x", kFs,
                               {{SpeakerSide::kLeft, 30.0, {d, d}},
                                {SpeakerSide::kLeft, 30.0, {d, d}},
                                {SpeakerSide::kRight, -30.0, {d, d}}})
                   .ok());
  EXPECT_TRUE(HrirSet::Create("x", kFs,
                              {{SpeakerSide::kLeft, 30.0, {d, d}},
                               {SpeakerSide::kRight, -30.0, {Delta(16, 0), d}}})
                  .ok());
}

TEST(HrirIndexTest, WriteThenLoadRoundTrips) {
  const auto dir =
      std::filesystem::temp_directory_path() / "cadenza_hrir_index_test";
  std::filesystem::remove_all(dir);
  const std::vector<HrirSet> sets = MakeSyntheticHrirs(kFs, 2, 8);
  ASSERT_TRUE(WriteHrirIndex(dir, sets).ok());
  auto back = LoadHrirIndex(dir / "index.json");
  ASSERT_TRUE(back.ok()) << back.status();
  ASSERT_EQ(back->size(), 2u);
  for (size_t s = 0; s < 2; ++s) {
    EXPECT_EQ((*back)[s].subject_id(), sets[s].subject_id());
    EXPECT_EQ((*back)[s].sample_rate_hz(), kFs);
    for (SpeakerSide side : {SpeakerSide::kLeft, SpeakerSide::kRight}) {
      EXPECT_EQ((*back)[s].Azimuths(side), sets[s].Azimuths(side));
      for (double az : sets[s].Azimuths(side)) {
        const HrirPair* a = sets[s].Find(side, az);
        const HrirPair* b = (*back)[s].Find(side, az);
        ASSERT_NE(b, nullptr);
        for (size_t i = 0; i < a->to_left_mic.size(); ++i) {
          EXPECT_FLOAT_EQ(b->to_left_mic[i], a->to_left_mic[i]);
          EXPECT_FLOAT_EQ(b->to_right_mic[i], a->to_right_mic[i]);
        }
      }
    }
  }
  EXPECT_FALSE(LoadHrirIndex(dir / "missing.json").ok());
  std::filesystem::remove_all(dir);
}

// Dataset planning and writing.

class SceneDatasetTest : public ::testing::Test {
 protected:
  SceneDatasetTest() {
    for (int t = 0; t < 3; ++t) {
      tracks_.push_back(MakeSyntheticTrack("track_" + std::to_string(t), kFs,
                                           42.0, DeriveSeed(11, t)));
    }
    listeners_ = MakeSyntheticListeners();
    hrirs_ = MakeSyntheticHrirs(kFs, 2, 3);
  }

  std::vector<Track> tracks_;
  std::vector<Listener> listeners_;
  std::vector<HrirSet> hrirs_;
};

TEST_F(SceneDatasetTest, SyntheticTracksAreFullyEligible) {
  for (const Track& t : tracks_) {
    auto index = SegmentTrack(t.id, t.stems, 10.0);
    EXPECT_EQ(index->EligibleStarts().size(), 4u);
  }
}

TEST_F(SceneDatasetTest, PlanCountsPairs) {
  SceneDatasetOptions o;
  o.mode = ChallengeMode::kIcassp24;
  o.master_seed = 9;
  o.scenes_per_track = 4;
  o.listeners_per_scene = 2;
  auto scenes = PlanSceneDataset(tracks_, listeners_, hrirs_, o);
  ASSERT_TRUE(scenes.ok()) << scenes.status();
  EXPECT_EQ(scenes->size(), 12u);
  size_t pairs = 0;
  std::set<std::pair<std::string, double>> segments;
  for (const SceneSpec& s : *scenes) {
    pairs += s.listener_ids.size();
    segments.insert({s.track_id, s.segment_start_s});
    EXPECT_TRUE(ValidateScene(s, o.mode).ok());
  }
  EXPECT_EQ(pairs, 24u);
  EXPECT_EQ(segments.size(), 12u) << "segments reused within a track";
}

TEST_F(SceneDatasetTest, Cad1UsesEveryListenerAndFreeStarts) {
  SceneDatasetOptions o;
  o.mode = ChallengeMode::kCad1;
  o.master_seed = 4;
  o.scenes_per_track = 1;
  auto scenes = PlanSceneDataset(tracks_, listeners_, {}, o);
  ASSERT_TRUE(scenes.ok()) << scenes.status();
  ASSERT_EQ(scenes->size(), 3u);
  for (const SceneSpec& s : *scenes) {
    EXPECT_EQ(s.listener_ids.size(), listeners_.size());
    EXPECT_LE(s.segment_start_s + 30.0, 42.0);
    EXPECT_TRUE(ValidateScene(s, o.mode).ok());
  }
}

TEST_F(SceneDatasetTest, ZeroCountsGiveEmptyManifest) {
  SceneDatasetOptions o;
  o.scenes_per_track = 0;
  auto scenes = PlanSceneDataset(tracks_, listeners_, hrirs_, o);
  ASSERT_TRUE(scenes.ok());
  EXPECT_TRUE(scenes->empty());
}

TEST_F(SceneDatasetTest, InsufficientSegmentsNamesTheTrack) {
  SceneDatasetOptions o;
  o.scenes_per_track = 5;
  auto scenes = PlanSceneDataset(tracks_, listeners_, hrirs_, o);
  ASSERT_FALSE(scenes.ok());
  EXPECT_NE(scenes.status().message().find("track_0"), std::string::npos);
  EXPECT_NE(scenes.status().message().find("track_2"), std::string::npos);
}

TEST_F(SceneDatasetTest, PlanIsDeterministicAndTrackLocal) {
  SceneDatasetOptions o;
  o.master_seed = 77;
  o.scenes_per_track = 2;
  o.listeners_per_scene = 3;
  auto a = PlanSceneDataset(tracks_, listeners_, hrirs_, o);
  auto b = PlanSceneDataset(tracks_, listeners_, hrirs_, o);
  EXPECT_EQ(SerializeScenes(*a), SerializeScenes(*b));
  // Dropping the last track leaves earlier tracks' scenes untouched.
  auto prefix =
      PlanSceneDataset(std::span(tracks_).first(2), listeners_, hrirs_, o);
  ASSERT_EQ(prefix->size(), 4u);
  for (size_t i = 0; i < 4; ++i) EXPECT_EQ((*prefix)[i], (*a)[i]);
  o.master_seed = 78;
  auto c = PlanSceneDataset(tracks_, listeners_, hrirs_, o);
  EXPECT_NE(SerializeScenes(*a), SerializeScenes(*c));
}

TEST_F(SceneDatasetTest, WriteThenOpen) {
  const auto dir =
      std::filesystem::temp_directory_path() / "cadenza_scene_dataset_test";
  std::filesystem::remove_all(dir);
  SceneDatasetOptions o;
  o.master_seed = 5;
  o.scenes_per_track = 1;
  o.listeners_per_scene = 2;
  o.jobs = 2;
  auto scenes = PlanSceneDataset(tracks_, listeners_, hrirs_, o);
  ASSERT_TRUE(
      WriteSceneDataset(dir, tracks_, listeners_, hrirs_, o, *scenes).ok());
  auto ds = SceneDataset::Open(dir);
  ASSERT_TRUE(ds.ok()) << ds.status();
  EXPECT_EQ(ds->mode(), ChallengeMode::kIcassp24);
  EXPECT_EQ(ds->sample_rate_hz(), kFs);
  EXPECT_EQ(ds->scenes(), *scenes);
  EXPECT_EQ(ds->NumPairs(), 6u);
  EXPECT_EQ(ds->listeners().size(), listeners_.size());
  EXPECT_EQ(ds->hrirs().size(), 2u);

  const SceneSpec& s = ds->scenes()[0];
  auto stems = ds->LoadStems(s.scene_id);
  ASSERT_TRUE(stems.ok()) << stems.status();
  EXPECT_EQ(stems->num_frames(), 10u * kFs);
  auto mixture = ds->LoadMixture(s.scene_id);
  ASSERT_TRUE(mixture.ok());
  auto expected = PresentToListenerPosition(stems->Sum(), s, ds->hrirs());
  double worst = 0.0;
  for (int c = 0; c < 2; ++c) {
    for (size_t i = 0; i < mixture->num_frames(); ++i) {
      worst = std::max(
          worst, std::abs(mixture->channel(c)[i] - expected->channel(c)[i]));
    }
  }
  EXPECT_LT(worst, 1e-6);
  EXPECT_FALSE(ds->LoadStems("nope").ok());
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace cadenza
