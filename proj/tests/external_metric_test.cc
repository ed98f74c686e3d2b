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

#include "cadenza/external_metric.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <thread>

#include "cadenza/audiology.h"
#include "gtest/gtest.h"

namespace cadenza {
namespace {

std::vector<double> Signal() {
  std::vector<double> x(800);
  for (size_t i = 0; i < x.size(); ++i) x[i] = 0.3 * std::sin(0.05 * i);
  return x;
}

ExternalMetric Shell(const std::string& script, double timeout_s = 30.0) {
  ExternalMetricOptions o;
  o.argv = {"/bin/sh", "-c", script};
  o.timeout_s = timeout_s;
  return ExternalMetric(o);
}

TEST(ExternalMetricTest, ParsesScore) {
  const auto x = Signal();
  auto s =
      Shell("echo '{\"score\": 0.5}'").Score(x, x, Audiogram::Flat(0), 16000);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_EQ(*s, 0.5);
}

TEST(ExternalMetricTest, ClampsToUnitInterval) {
  const auto x = Signal();
  EXPECT_EQ(
      *Shell("echo '{\"score\": 1.7}'").Score(x, x, Audiogram::Flat(0), 8000),
      1.0);
  EXPECT_EQ(
      *Shell("echo '{\"score\": -2}'").Score(x, x, Audiogram::Flat(0), 8000),
      0.0);
}

TEST(ExternalMetricTest, NonzeroExitIsAnErrorWithTranscript) {
  const auto x = Signal();
  auto s = Shell("echo boom >&2; exit 3").Score(x, x, Audiogram::Flat(0), 8000);
  ASSERT_FALSE(s.ok());
  EXPECT_NE(s.status().message().find("exited with 3"), std::string::npos);
  EXPECT_NE(s.status().message().find("boom"), std::string::npos);
  EXPECT_NE(s.status().message().find("/bin/sh"), std::string::npos);
}

TEST(ExternalMetricTest, UnparsableOutputIsAnError) {
  const auto x = Signal();
  EXPECT_FALSE(
      Shell("echo not-json").Score(x, x, Audiogram::Flat(0), 8000).ok());
  EXPECT_FALSE(Shell("echo '{\"value\": 1}'")
                   .Score(x, x, Audiogram::Flat(0), 8000)
                   .ok());
}

TEST(ExternalMetricTest, TimeoutKillsTheEvaluator) {
  const auto x = Signal();
  const auto start = std::chrono::steady_clock::now();
  auto s = Shell("sleep 20", 0.3).Score(x, x, Audiogram::Flat(0), 8000);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  ASSERT_FALSE(s.ok());
  EXPECT_EQ(s.status().code(), absl::StatusCode::kDeadlineExceeded);
  EXPECT_LT(elapsed, 5.0);
}

TEST(ExternalMetricTest, PlaceholdersAndListenerJsonRoundTrip) {
  const auto keep =
      std::filesystem::temp_directory_path() / "cadenza_external_metric_keep";
  std::filesystem::remove_all(keep);
  std::filesystem::create_directories(keep);
  const std::string script =
      "cp {listener_json} " + (keep / "listener.json").string() +
      " && test -s {processed} && test -s {reference} && "
      "echo {fs} > " +
      (keep / "fs.txt").string() + " && echo '{\"score\": 0.25}'";
  Audiogram::Levels levels = {10, 15, 20, 30, 40, 50, 60, 70};
  const Audiogram a = *Audiogram::Create(levels);
  const auto x = Signal();
  auto s = Shell(script).Score(x, x, a, 22050);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_EQ(*s, 0.25);
  auto loaded = LoadListeners(keep / "listener.json");
  ASSERT_TRUE(loaded.ok()) << loaded.status();
  ASSERT_EQ(loaded->listeners.size(), 1u);
  EXPECT_EQ(loaded->listeners[0].left, a);
  EXPECT_EQ(loaded->listeners[0].right, a);
  EXPECT_EQ(std::filesystem::file_size(keep / "fs.txt"), 6u);
  std::filesystem::remove_all(keep);
}

TEST(ExternalMetricTest, ConcurrentCallsRespectLimit) {
  ExternalMetricOptions o;
  o.argv = {"/bin/sh", "-c", "echo '{\"score\": 0.75}'"};
  o.max_parallel = 2;
  const ExternalMetric m(o);
  const auto x = Signal();
  std::vector<double> scores(6, 0.0);
  std::vector<std::thread> threads;
  for (size_t i = 0; i < scores.size(); ++i) {
    threads.emplace_back([&, i] {
      scores[i] = m.Score(x, x, Audiogram::Flat(0), 8000).value_or(-1.0);
    });
  }
  for (auto& t : threads) t.join();
  for (double s : scores) EXPECT_EQ(s, 0.75);
}

TEST(ExternalMetricTest, EmptyCommandIsAnError) {
  const ExternalMetric m(ExternalMetricOptions{});
  const auto x = Signal();
  EXPECT_FALSE(m.Score(x, x, Audiogram::Flat(0), 8000).ok());
}

}  // namespace
}  // namespace cadenza
