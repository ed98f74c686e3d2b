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

// Command-line front end for scene generation, enhancement, submission
// checks, evaluation, statistics and causality audits.
//
// Exit codes: 0 success, 1 validation or audit failure, 2 runtime error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "cadenza/audiology.h"
#include "cadenza/causality.h"
#include "cadenza/config.h"
#include "cadenza/evaluation.h"
#include "cadenza/external_metric.h"
#include "cadenza/file_util.h"
#include "cadenza/fixtures.h"
#include "cadenza/metrics.h"
#include "cadenza/prescription.h"
#include "cadenza/report.h"
#include "cadenza/scene_dataset.h"
#include "cadenza/submission.h"
#include "cadenza/system_runner.h"
#include "glog/logging.h"

namespace cadenza {
namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitError = 2;

struct GlobalFlags {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<int> jobs;
  std::string data_root;
};

// Command-line values override the config file, which overrides defaults.
struct Context {
  HarnessConfig config;
  uint64_t seed = 0;
  int jobs = 1;
  std::string data_root;
};

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status << "\n";
  return kExitError;
}

absl::StatusOr<Context> ResolveContext(const GlobalFlags& flags) {
  Context ctx;
  if (!flags.config_path.empty()) {
    auto config = LoadConfig(flags.config_path);
    if (!config.ok()) return config.status();
    ctx.config = *std::move(config);
  }
  ctx.seed = flags.seed.value_or(ctx.config.seed.value_or(0));
  ctx.jobs = flags.jobs.value_or(ctx.config.jobs.value_or(0));
  ctx.data_root = !flags.data_root.empty() ? flags.data_root
                                           : ctx.config.data_root.value_or("");
  return ctx;
}

absl::StatusOr<std::unique_ptr<MetricBackend>> MakeBackend(
    const Context& ctx, const std::string& override_kind,
    const std::vector<std::string>& override_argv) {
  MetricKind kind = ctx.config.metric;
  ExternalMetricOptions external = ctx.config.external_metric;
  if (!override_kind.empty()) {
    kind = override_kind == "external" ? MetricKind::kExternal
                                       : MetricKind::kBuiltin;
  }
  if (!override_argv.empty()) external.argv = override_argv;
  if (kind == MetricKind::kBuiltin) return std::make_unique<BuiltinMetric>();
  if (external.argv.empty()) {
    return absl::InvalidArgumentError(
        "the external metric needs a command (--metric-arg or "
        "metric.command)");
  }
  return std::make_unique<ExternalMetric>(std::move(external));
}

// --- fixtures generate ----------------------------------------------------

struct FixtureFlags {
  std::string out;
  FixtureDataOptions options;
};

int RunFixtures(const Context& ctx, FixtureFlags flags) {
  flags.options.seed = ctx.seed;
  absl::Status st = WriteFixtureDataRoot(flags.out, flags.options);
  if (!st.ok()) return Fail(st);
  std::cout << "wrote synthetic data root to " << flags.out << "\n";
  return kExitOk;
}

// --- scenes generate ------------------------------------------------------

struct ScenesFlags {
  std::string out;
  std::string mode;
  std::optional<int> scenes_per_track;
  std::optional<int> listeners_per_scene;
};

int RunScenes(const Context& ctx, const ScenesFlags& flags) {
  if (ctx.data_root.empty()) {
    return Fail(absl::InvalidArgumentError(
        "no data root: pass --data-root or set CADENZA_DATA_ROOT"));
  }
  SceneDatasetOptions options = ctx.config.scenes;
  if (!flags.mode.empty()) {
    auto mode = ParseChallengeMode(flags.mode);
    if (!mode.has_value()) {
      return Fail(
          absl::InvalidArgumentError("--mode must be CAD1 or ICASSP24"));
    }
    options.mode = *mode;
  }
  if (flags.scenes_per_track)
    options.scenes_per_track = *flags.scenes_per_track;
  if (flags.listeners_per_scene) {
    options.listeners_per_scene = *flags.listeners_per_scene;
  }
  options.master_seed = ctx.seed;
  options.jobs = ctx.jobs;
  auto scenes = GenerateSceneDataset(ctx.data_root, flags.out, options);
  if (!scenes.ok()) return Fail(scenes.status());
  size_t pairs = 0;
  for (const SceneSpec& s : *scenes) pairs += s.listener_ids.size();
  std::cout << absl::StrFormat(
      "wrote %d %s scenes (%d scene/listener pairs) "
      "to %s\n",
      scenes->size(), std::string(ChallengeModeName(options.mode)), pairs,
      flags.out);
  return kExitOk;
}

// --- listeners inspect ----------------------------------------------------

int RunListeners(const Context& ctx, std::string file) {
  if (file.empty()) {
    if (ctx.data_root.empty()) {
      return Fail(absl::InvalidArgumentError(
          "pass --file or a data root containing listeners.json"));
    }
    file = (fs::path(ctx.data_root) / "listeners.json").string();
  }
  auto loaded = LoadListeners(file);
  if (!loaded.ok()) return Fail(loaded.status());
  std::cout << absl::StrFormat("%-12s %8s %8s  %-18s %-18s\n", "listener",
                               "4FA L", "4FA R", "better ear", "mean ear");
  for (const Listener& l : loaded->listeners) {
    std::cout << absl::StrFormat(
        "%-12s %8.1f %8.1f  %-18s %-18s\n", l.id, FourFrequencyAverage(l.left),
        FourFrequencyAverage(l.right),
        std::string(SeverityName(BetterEarSeverity(l))),
        std::string(SeverityName(MeanEarSeverity(l))));
  }
  for (const std::string& w : loaded->warnings) {
    std::cout << "warning: " << w << "\n";
  }
  return kExitOk;
}

// --- enhance run ----------------------------------------------------------

struct EnhanceFlags {
  std::string scenes;
  std::string system = "oracle";
  std::string system_id;
  std::string out;
  std::optional<double> declared_lookahead_ms;
  bool emit_stems = false;
  std::string format;
};

int RunEnhance(const Context& ctx, const EnhanceFlags& flags) {
  auto dataset = SceneDataset::Open(flags.scenes);
  if (!dataset.ok()) return Fail(dataset.status());
  auto system = ParseSystem(flags.system, flags.system_id);
  if (!system.ok()) return Fail(system.status());
  system->enhancer = ctx.config.enhancer;
  if (flags.emit_stems) system->enhancer.emit_stems = true;
  if (!flags.format.empty()) {
    auto format = ParseSampleFormat(flags.format);
    if (!format.has_value()) {
      return Fail(absl::InvalidArgumentError(
          "--format must be pcm16, pcm24 or float32"));
    }
    system->enhancer.output_format = *format;
  }
  if (flags.declared_lookahead_ms) {
    system->declared_lookahead_ms = *flags.declared_lookahead_ms;
  }
  auto manifest = RunSystem(*dataset, *system, flags.out, ctx.jobs);
  if (!manifest.ok()) return Fail(manifest.status());
  std::cout << absl::StrFormat("wrote %d pairs for system %s to %s\n",
                               manifest->expected_pairs, manifest->system_id,
                               flags.out);
  return kExitOk;
}

// --- submission validate --------------------------------------------------

struct ValidateFlags {
  std::string scenes;
  std::string submission;
  std::string report;
};

int RunValidate(const ValidateFlags& flags) {
  auto dataset = SceneDataset::Open(flags.scenes);
  if (!dataset.ok()) return Fail(dataset.status());
  auto manifest = LoadManifest(flags.submission);
  if (!manifest.ok()) return Fail(manifest.status());
  auto report = ValidateSubmission(flags.submission, *manifest, *dataset);
  if (!report.ok()) return Fail(report.status());
  if (!flags.report.empty()) {
    absl::Status st =
        WriteTextFile(flags.report, ValidationReportToJson(*report));
    if (!st.ok()) return Fail(st);
  }
  for (const std::string& m : report->missing)
    std::cout << "missing: " << m << "\n";
  for (const std::string& e : report->extra)
    std::cout << "extra: " << e << "\n";
  for (const FileIssue& e : report->format_errors) {
    std::cout << "format: " << e.file << ": " << e.message << "\n";
  }
  size_t clipped_files = 0;
  for (const auto& [name, count] : report->clipping) {
    if (count > 0) ++clipped_files;
  }
  std::cout << absl::StrFormat(
      "%s: %d missing, %d extra, %d format errors, %d files with clipping\n",
      report->pass ? "PASS" : "FAIL", report->missing.size(),
      report->extra.size(), report->format_errors.size(), clipped_files);
  return report->pass ? kExitOk : kExitFailed;
}

// --- evaluate -------------------------------------------------------------

struct EvaluateFlags {
  std::string scenes;
  std::string submission;
  std::string out;
  bool force = false;
  bool no_stems = false;
  std::string metric;
  std::vector<std::string> metric_argv;
};

int RunEvaluate(const Context& ctx, const EvaluateFlags& flags) {
  auto dataset = SceneDataset::Open(flags.scenes);
  if (!dataset.ok()) return Fail(dataset.status());
  auto backend = MakeBackend(ctx, flags.metric, flags.metric_argv);
  if (!backend.ok()) return Fail(backend.status());
  EvaluateOptions options;
  options.jobs = ctx.jobs;
  options.force = flags.force;
  options.score_stems = !flags.no_stems;
  options.nalr_taps = ctx.config.enhancer.nalr_taps;
  auto run = EvaluateSubmission(flags.submission, *dataset, **backend, options);
  if (!run.ok()) {
    if (run.status().code() == absl::StatusCode::kFailedPrecondition) {
      std::cerr << "error: " << run.status().message() << "\n";
      return kExitFailed;
    }
    return Fail(run.status());
  }
  absl::Status st = WriteTextFile(flags.out, RecordsToCsv(run->records));
  if (!st.ok()) return Fail(st);
  for (const LeaderboardRow& row : Leaderboard(run->records)) {
    std::cout << absl::StrFormat("%s: %.4f ± %.4f over %d pairs, %d failed\n",
                                 row.system_id, row.mean_score, row.std_score,
                                 row.n, row.failed);
  }
  return kExitOk;
}

// --- report stats ---------------------------------------------------------

struct ReportFlags {
  std::vector<std::string> records;
  std::string json;
  std::string markdown;
};

int RunReport(const ReportFlags& flags) {
  std::vector<EvaluationRecord> all;
  for (const std::string& path : flags.records) {
    auto records = LoadRecordsCsv(path);
    if (!records.ok()) return Fail(records.status());
    all.insert(all.end(), records->begin(), records->end());
  }
  const StatsReport report = BuildStatsReport(all);
  const std::string md = StatsReportToMarkdown(report);
  if (!flags.json.empty()) {
    absl::Status st = WriteTextFile(flags.json, StatsReportToJson(report));
    if (!st.ok()) return Fail(st);
  }
  if (!flags.markdown.empty()) {
    absl::Status st = WriteTextFile(flags.markdown, md);
    if (!st.ok()) return Fail(st);
  }
  std::cout << md;
  return kExitOk;
}

// --- probe causality ------------------------------------------------------

struct ProbeFlags {
  std::string processor;
  int sample_rate_hz = 44100;
  std::optional<double> bound_ms;
};

absl::StatusOr<AudioProcessor> MakeProcessor(const Context& ctx,
                                             const std::string& spec) {
  if (spec == "causal-fir") {
    return CausalFirProcessor({0.25, 0.5, 0.25});
  }
  if (spec == "peak-normalizer") return GlobalPeakNormalizer();
  if (spec == "passthrough") {
    return AudioProcessor(
        [](const AudioBuffer& x) -> absl::StatusOr<AudioBuffer> {
          return PassthroughSystem(x);
        });
  }
  if (spec.starts_with("limiter:")) {
    double ms = 0.0;
    if (!CLI::detail::lexical_cast(spec.substr(8), ms) || ms < 0.0) {
      return absl::InvalidArgumentError("limiter:<ms> needs a lookahead in ms");
    }
    return LookaheadLimiter(ms);
  }
  if (spec.starts_with("nalr:")) {
    const std::string id = spec.substr(5);
    if (ctx.data_root.empty()) {
      return absl::InvalidArgumentError(
          "nalr:<listener> needs a data root with listeners.json");
    }
    auto loaded = LoadListeners(fs::path(ctx.data_root) / "listeners.json");
    if (!loaded.ok()) return loaded.status();
    const Listener* l = FindListener(loaded->listeners, id);
    if (l == nullptr) {
      return absl::NotFoundError("no listener " + id);
    }
    const int taps = ctx.config.enhancer.nalr_taps;
    return AudioProcessor([listener = *l, taps](const AudioBuffer& x) {
      return AmplifyForListener(x, listener, taps);
    });
  }
  return absl::InvalidArgumentError(
      "unknown processor '" + spec +
      "'; expected causal-fir, passthrough, peak-normalizer, limiter:<ms> or "
      "nalr:<listener>");
}

int RunProbe(const Context& ctx, const ProbeFlags& flags) {
  auto processor = MakeProcessor(ctx, flags.processor);
  if (!processor.ok()) return Fail(processor.status());
  CausalityProbeOptions options = ctx.config.probe;
  options.seed = ctx.seed;
  if (flags.bound_ms) options.bound_ms = *flags.bound_ms;
  auto report = ProbeCausality(*processor, flags.sample_rate_hz, options);
  if (!report.ok()) return Fail(report.status());
  const std::string measured =
      std::isinf(report->measured_dependence_ms)
          ? absl::StrFormat("more than %.1f ms", options.max_lookahead_ms)
          : absl::StrFormat("%.3f ms", report->measured_dependence_ms);
  std::cout << absl::StrFormat(
      "%s: future dependence %s, bound %.1f ms%s\n",
      report->pass ? "PASS" : "FAIL", measured, report->bound_ms,
      report->input_independent ? ", output does not depend on the input" : "");
  return report->pass ? kExitOk : kExitFailed;
}

int Main(int argc, char** argv) {
  CLI::App app{
      "Music enhancement challenge toolkit: scenes, systems, "
      "submission checks, evaluation and statistics."};
  app.require_subcommand(1);
  GlobalFlags globals;
  app.add_option("--config", globals.config_path, "TOML configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", globals.seed, "Master random seed");
  app.add_option("--jobs", globals.jobs, "Worker threads (0 uses every core)");
  app.add_option("--data-root", globals.data_root,
                 "Directory with listeners.json, hrir/ and music/")
      ->envname("CADENZA_DATA_ROOT");

  FixtureFlags fixture_flags;
  CLI::App* fixtures = app.add_subcommand("fixtures", "Synthetic test data");
  fixtures->require_subcommand(1);
  CLI::App* fixtures_gen =
      fixtures->add_subcommand("generate", "Write a synthetic data root");
  fixtures_gen->add_option("--out", fixture_flags.out)->required();
  fixtures_gen->add_option("--rate", fixture_flags.options.sample_rate_hz);
  fixtures_gen->add_option("--tracks", fixture_flags.options.num_tracks);
  fixtures_gen->add_option("--duration", fixture_flags.options.track_dur_s,
                           "Track length in seconds");
  fixtures_gen->add_option("--hrir-subjects",
                           fixture_flags.options.num_hrir_subjects);

  ScenesFlags scenes_flags;
  CLI::App* scenes = app.add_subcommand("scenes", "Scene sets");
  scenes->require_subcommand(1);
  CLI::App* scenes_gen = scenes->add_subcommand(
      "generate", "Sample scenes from the data root and render their audio");
  scenes_gen->add_option("--out", scenes_flags.out)->required();
  scenes_gen->add_option("--mode", scenes_flags.mode, "CAD1 or ICASSP24");
  scenes_gen->add_option("--scenes-per-track", scenes_flags.scenes_per_track);
  scenes_gen->add_option("--listeners-per-scene",
                         scenes_flags.listeners_per_scene,
                         "0 assigns every listener to every scene");

  std::string listeners_file;
  CLI::App* listeners = app.add_subcommand("listeners", "Listener panels");
  listeners->require_subcommand(1);
  CLI::App* listeners_inspect = listeners->add_subcommand(
      "inspect", "Print four-frequency averages and severity grades");
  listeners_inspect->add_option("--file", listeners_file,
                                "Listener JSON (default: data root)");

  EnhanceFlags enhance_flags;
  CLI::App* enhance = app.add_subcommand("enhance", "Enhancement systems");
  enhance->require_subcommand(1);
  CLI::App* enhance_run = enhance->add_subcommand(
      "run", "Run a system over a scene set and write a submission");
  enhance_run->add_option("--scenes", enhance_flags.scenes)->required();
  enhance_run->add_option("--system", enhance_flags.system,
                          "oracle, passthrough or stems:<dir>");
  enhance_run->add_option("--system-id", enhance_flags.system_id);
  enhance_run->add_option("--out", enhance_flags.out)->required();
  enhance_run->add_option("--declared-lookahead-ms",
                          enhance_flags.declared_lookahead_ms);
  enhance_run->add_flag("--emit-stems", enhance_flags.emit_stems);
  enhance_run->add_option("--format", enhance_flags.format,
                          "pcm16, pcm24 or float32");

  ValidateFlags validate_flags;
  CLI::App* submission = app.add_subcommand("submission", "Submissions");
  submission->require_subcommand(1);
  CLI::App* validate =
      submission->add_subcommand("validate", "Check a submission directory");
  validate->add_option("--scenes", validate_flags.scenes)->required();
  validate->add_option("--submission", validate_flags.submission)->required();
  validate->add_option("--report", validate_flags.report,
                       "Write the report as JSON");

  EvaluateFlags evaluate_flags;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score a submission into a records CSV");
  evaluate->add_option("--scenes", evaluate_flags.scenes)->required();
  evaluate->add_option("--submission", evaluate_flags.submission)->required();
  evaluate->add_option("--out", evaluate_flags.out)->required();
  evaluate->add_flag("--force", evaluate_flags.force,
                     "Score a submission that fails validation");
  evaluate->add_flag("--no-stems", evaluate_flags.no_stems,
                     "Skip per-stem scoring");
  evaluate->add_option("--metric", evaluate_flags.metric)
      ->check(CLI::IsMember({"builtin", "external"}));
  evaluate
      ->add_option("--metric-arg", evaluate_flags.metric_argv,
                   "External metric argv element (repeatable)")
      ->allow_extra_args(false);

  ReportFlags report_flags;
  CLI::App* report = app.add_subcommand("report", "Reports");
  report->require_subcommand(1);
  CLI::App* report_stats = report->add_subcommand(
      "stats", "Leaderboard, Kruskal-Wallis, Dunn and Spearman analysis");
  report_stats
      ->add_option("--records", report_flags.records, "Records CSV files")
      ->required();
  report_stats->add_option("--json", report_flags.json);
  report_stats->add_option("--markdown", report_flags.markdown);

  ProbeFlags probe_flags;
  CLI::App* probe = app.add_subcommand("probe", "Audits");
  probe->require_subcommand(1);
  CLI::App* causality =
      probe->add_subcommand("causality", "Measure future-input dependence");
  causality->add_option("--processor", probe_flags.processor)->required();
  causality->add_option("--rate", probe_flags.sample_rate_hz);
  causality->add_option("--bound-ms", probe_flags.bound_ms);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  auto ctx = ResolveContext(globals);
  if (!ctx.ok()) return Fail(ctx.status());

  if (fixtures_gen->parsed()) return RunFixtures(*ctx, fixture_flags);
  if (scenes_gen->parsed()) return RunScenes(*ctx, scenes_flags);
  if (listeners_inspect->parsed()) return RunListeners(*ctx, listeners_file);
  if (enhance_run->parsed()) return RunEnhance(*ctx, enhance_flags);
  if (validate->parsed()) return RunValidate(validate_flags);
  if (evaluate->parsed()) return RunEvaluate(*ctx, evaluate_flags);
  if (report_stats->parsed()) return RunReport(report_flags);
  if (causality->parsed()) return RunProbe(*ctx, probe_flags);
  return kExitError;
}

}  // namespace
}  // namespace cadenza

int main(int argc, char** argv) {
  google::InitGoogleLogging(argv[0]);
  FLAGS_logtostderr = true;
  return cadenza::Main(argc, argv);
}
