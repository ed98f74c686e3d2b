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

#include "cadenza/config.h"

#include "absl/strings/match.h"
#include "gtest/gtest.h"

namespace cadenza {
namespace {

TEST(ConfigTest, EmptyGivesDefaults) {
  auto c = ParseConfig("");
  ASSERT_TRUE(c.ok()) << c.status();
  EXPECT_FALSE(c->seed.has_value());
  EXPECT_FALSE(c->jobs.has_value());
  EXPECT_EQ(c->scenes.mode, ChallengeMode::kIcassp24);
  EXPECT_EQ(c->enhancer.nalr_taps, kDefaultNalrTaps);
  EXPECT_EQ(c->metric, MetricKind::kBuiltin);
  EXPECT_EQ(c->probe.bound_ms, kCausalityBoundMs);
}

TEST(ConfigTest, ReadsEverySection) {
  auto c = ParseConfig(R"(
seed = 7
jobs = 3
data_root = "/data"

[scenes]
mode = "CAD1"
scenes_per_track = 2
listeners_per_scene = 3
silence_floor_dbfs = -55

[enhancer]
apply_gains = false
amplification = "none"
normalize_target = 0.5
output_format = "pcm16"
nalr_taps = 301
emit_stems = true

[metric]
backend = "external"
command = ["haaqi", "{processed}", "{reference}"]
timeout_s = 12.5
max_parallel = 2

[probe]
bound_ms = 4
num_probes = 8
tolerance = 1e-6
)");
  ASSERT_TRUE(c.ok()) << c.status();
  EXPECT_EQ(*c->seed, 7u);
  EXPECT_EQ(*c->jobs, 3);
  EXPECT_EQ(*c->data_root, "/data");
  EXPECT_EQ(c->scenes.mode, ChallengeMode::kCad1);
  EXPECT_EQ(c->scenes.scenes_per_track, 2);
  EXPECT_EQ(c->scenes.listeners_per_scene, 3);
  EXPECT_EQ(c->scenes.silence_floor_dbfs, -55.0);
  EXPECT_FALSE(c->enhancer.apply_gains);
  EXPECT_EQ(c->enhancer.amplification, Amplification::kNone);
  EXPECT_EQ(c->enhancer.normalize_target, 0.5);
  EXPECT_EQ(c->enhancer.output_format, SampleFormat::kPcm16);
  EXPECT_EQ(c->enhancer.nalr_taps, 301);
  EXPECT_TRUE(c->enhancer.emit_stems);
  EXPECT_EQ(c->metric, MetricKind::kExternal);
  EXPECT_EQ(c->external_metric.argv.size(), 3u);
  EXPECT_EQ(c->external_metric.timeout_s, 12.5);
  EXPECT_EQ(c->external_metric.max_parallel, 2);
  EXPECT_EQ(c->probe.bound_ms, 4.0);
  EXPECT_EQ(c->probe.num_probes, 8);
  EXPECT_EQ(c->probe.tolerance, 1e-6);
}

TEST(ConfigTest, UnknownKeysAreRejected) {
  auto c = ParseConfig("[scenes]\nmodee = \"CAD1\"\n");
  ASSERT_FALSE(c.ok());
  EXPECT_TRUE(absl::StrContains(c.status().message(), "modee"));
  EXPECT_FALSE(ParseConfig("colour = 1\n").ok());
}

TEST(ConfigTest, BadValuesAreRejected) {
  EXPECT_FALSE(ParseConfig("seed = \"x\"\n").ok());
  EXPECT_FALSE(ParseConfig("seed = -1\n").ok());
  EXPECT_FALSE(ParseConfig("[scenes]\nmode = \"CAD9\"\n").ok());
  EXPECT_FALSE(ParseConfig("[enhancer]\nnalr_taps = 220\n").ok());
  EXPECT_FALSE(ParseConfig("[enhancer]\noutput_format = \"mp3\"\n").ok());
  EXPECT_FALSE(ParseConfig("[metric]\nbackend = \"external\"\n").ok());
  EXPECT_FALSE(ParseConfig("[metric]\ncommand = [1, 2]\n").ok());
  EXPECT_FALSE(ParseConfig("scenes = 3\n").ok());
  auto syntax = ParseConfig("[scenes\n");
  ASSERT_FALSE(syntax.ok());
  EXPECT_TRUE(absl::StrContains(syntax.status().message(), "line 1"));
}

}  // namespace
}  // namespace cadenza
