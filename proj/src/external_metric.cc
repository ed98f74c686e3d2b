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

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "cadenza/file_util.h"
#include "cadenza/wav_io.h"
#include "json.hpp"

namespace cadenza {
namespace {

constexpr size_t kTranscriptLimit = 4096;

std::string Truncated(std::string s) {
  if (s.size() > kTranscriptLimit) {
    s.resize(kTranscriptLimit);
    s += "...";
  }
  return s;
}

// Removes the workspace when the call finishes, whatever the outcome.
struct WorkspaceGuard {
  std::filesystem::path path;
  ~WorkspaceGuard() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

absl::StatusOr<std::filesystem::path> MakeWorkspace(
    const std::filesystem::path& root) {
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  std::string pattern = (root / "cadenza_metric_XXXXXX").string();
  if (mkdtemp(pattern.data()) == nullptr) {
    return absl::InternalError(
        absl::StrCat("cannot create a workspace under ", root.string()));
  }
  return std::filesystem::path(pattern);
}

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string stdout_text;
  std::string stderr_text;
};

absl::StatusOr<ProcessResult> RunProcess(const std::vector<std::string>& argv,
                                         const std::filesystem::path& dir,
                                         double timeout_s) {
  const std::string out_path = (dir / "stdout.txt").string();
  const std::string err_path = (dir / "stderr.txt").string();
  std::vector<char*> args;
  for (const std::string& a : argv)
    args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  const pid_t pid = fork();
  if (pid < 0) return absl::InternalError("fork failed");
  if (pid == 0) {
    const int out = open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    const int err = open(err_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (out < 0 || err < 0) _exit(126);
    dup2(out, STDOUT_FILENO);
    dup2(err, STDERR_FILENO);
    setpgid(0, 0);
    execvp(args[0], args.data());
    _exit(127);
  }
  ProcessResult result;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(timeout_s);
  int status = 0;
  auto wait_step = std::chrono::milliseconds(1);
  while (true) {
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0) return absl::InternalError("waitpid failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      result.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(wait_step);
    wait_step = std::min(wait_step * 2, std::chrono::milliseconds(50));
  }
  if (!result.timed_out) {
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  result.stdout_text = ReadTextFile(out_path).value_or("");
  result.stderr_text = ReadTextFile(err_path).value_or("");
  return result;
}

}  // namespace

ExternalMetric::ExternalMetric(ExternalMetricOptions options)
    : options_(std::move(options)),
      slots_(std::make_unique<std::counting_semaphore<>>(
          std::max(1, options_.max_parallel))) {}

absl::StatusOr<double> ExternalMetric::Score(std::span<const double> processed,
                                             std::span<const double> reference,
                                             const Audiogram& audiogram,
                                             int fs) const {
  if (options_.argv.empty()) {
    return absl::FailedPreconditionError("external metric command is empty");
  }
  if (processed.empty() || reference.empty()) {
    return absl::InvalidArgumentError("metric input has zero length");
  }
  auto workspace = MakeWorkspace(options_.workspace_root);
  if (!workspace.ok()) return workspace.status();
  WorkspaceGuard guard{*workspace};

  const std::filesystem::path proc_path = *workspace / "processed.wav";
  const std::filesystem::path ref_path = *workspace / "reference.wav";
  const std::filesystem::path listener_path = *workspace / "listener.json";
  for (const auto& [path, signal] :
       {std::pair{proc_path, processed}, std::pair{ref_path, reference}}) {
    auto buf = AudioBuffer::Create(
        fs, {std::vector<double>(signal.begin(), signal.end())});
    if (!buf.ok()) return buf.status();
    absl::Status st = WriteWav(path, *buf, SampleFormat::kFloat32);
    if (!st.ok()) return st;
  }
  const Listener listener{"listener", audiogram, audiogram};
  absl::Status st =
      SaveListeners(listener_path, std::span<const Listener>(&listener, 1));
  if (!st.ok()) return st;

  std::vector<std::string> argv;
  for (const std::string& a : options_.argv) {
    argv.push_back(
        absl::StrReplaceAll(a, {{"{processed}", proc_path.string()},
                                {"{reference}", ref_path.string()},
                                {"{listener_json}", listener_path.string()},
                                {"{fs}", absl::StrCat(fs)}}));
  }

  slots_->acquire();
  auto result = RunProcess(argv, *workspace, options_.timeout_s);
  slots_->release();
  if (!result.ok()) return result.status();

  auto transcript = [&] {
    return absl::StrCat("command: ", absl::StrJoin(argv, " "),
                        "\nstdout: ", Truncated(result->stdout_text),
                        "\nstderr: ", Truncated(result->stderr_text));
  };
  if (result->timed_out) {
    return absl::DeadlineExceededError(
        absl::StrCat("external metric timed out after ", options_.timeout_s,
                     " s\n", transcript()));
  }
  if (result->exit_code != 0) {
    return absl::InternalError(absl::StrCat(
        "external metric exited with ", result->exit_code, "\n", transcript()));
  }
  auto j = nlohmann::json::parse(result->stdout_text, nullptr,
                                 /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object() || !j.contains("score") ||
      !j["score"].is_number() || !std::isfinite(j["score"].get<double>())) {
    return absl::InvalidArgumentError(absl::StrCat(
        "external metric output lacks a numeric \"score\"\n", transcript()));
  }
  return std::clamp(j["score"].get<double>(), 0.0, 1.0);
}

}  // namespace cadenza
