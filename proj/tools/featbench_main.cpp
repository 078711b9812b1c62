#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "featbench/harness/pipeline.hpp"

namespace {

using featbench::harness::RunConfig;
using featbench::harness::StageReport;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitInternal = 3;

void print_report(const StageReport& report) {
  if (report.skipped) {
    std::printf("[%s] up to date (%zu files verified, %.0f ms)\n",
                report.stage.c_str(), report.file_count, report.elapsed_ms);
  } else {
    std::printf("[%s] wrote %zu files in %.0f ms\n", report.stage.c_str(),
                report.file_count, report.elapsed_ms);
  }
}

struct CliOverrides {
  std::string config_path;
  std::string out_dir;
  int jobs = -1;
  long seed = -1;

  std::string scenes_root;
  int synthetic = -1;
  int synthetic_size = -1;
  std::vector<std::string> transforms;
  std::vector<std::string> detectors;
  std::string external_dir;
  std::string external_format;
  std::string external_id;
  double epsilon = -1;
  std::string detector_a;
  std::string detector_b;
  std::vector<double> thresholds;
};

RunConfig make_config(const CliOverrides& cli) {
  RunConfig config;
  if (!cli.config_path.empty()) {
    config = featbench::harness::load_config(cli.config_path);
  }
  // Flags win over file keys.
  if (!cli.out_dir.empty()) config.out_dir = cli.out_dir;
  if (cli.jobs >= 0) config.jobs = cli.jobs;
  if (cli.seed >= 0) config.seed = static_cast<std::uint64_t>(cli.seed);
  if (!cli.scenes_root.empty()) config.scenes_root = cli.scenes_root;
  if (cli.synthetic >= 0) config.synthetic_scenes = cli.synthetic;
  if (cli.synthetic_size >= 0) config.synthetic_size = cli.synthetic_size;
  if (!cli.transforms.empty()) {
    config.kinds.clear();
    for (const std::string& name : cli.transforms) {
      config.kinds.push_back(
          featbench::imaging::transform_kind_from_string(name));
    }
  }
  if (!cli.detectors.empty()) config.builtin = cli.detectors;
  if (!cli.external_dir.empty()) config.external_dir = cli.external_dir;
  if (!cli.external_format.empty()) config.external_format = cli.external_format;
  if (!cli.external_id.empty()) config.external_id = cli.external_id;
  if (cli.epsilon > 0) config.match.epsilon = cli.epsilon;
  if (!cli.detector_a.empty()) config.detector_a = cli.detector_a;
  if (!cli.detector_b.empty()) config.detector_b = cli.detector_b;
  if (!cli.thresholds.empty()) config.thresholds = cli.thresholds;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "featbench: performance bounds and McNemar comparison of local feature "
      "detectors under controlled image transformations"};
  app.require_subcommand(1);

  CliOverrides cli;
  app.add_option("--config", cli.config_path, "TOML run configuration");
  app.add_option("--out", cli.out_dir, "output directory");
  app.add_option("--jobs", cli.jobs, "parallel scene workers (0 = all cores)");
  app.add_option("--seed", cli.seed, "seed for synthetic scene generation");

  auto* synthesize = app.add_subcommand(
      "synthesize", "build transformation sequences from reference images");
  synthesize->add_option("--scenes-root", cli.scenes_root,
                         "directory of reference images");
  synthesize->add_option("--synthetic", cli.synthetic,
                         "generate this many synthetic scenes instead");
  synthesize->add_option("--size", cli.synthetic_size,
                         "synthetic scene edge length");
  synthesize->add_option("--transform", cli.transforms,
                         "jpeg|blur|brightness (repeatable)");

  auto* detect = app.add_subcommand(
      "detect", "run built-in detectors over synthesized sequences");
  detect->add_option("--detector", cli.detectors, "harris|dog (repeatable)");
  detect->add_option("--transform", cli.transforms,
                     "restrict to these transforms");
  detect->add_option("--external-dir", cli.external_dir,
                     "external mode: ingest this keypoint tree instead");
  detect->add_option("--format", cli.external_format,
                     "external keypoint format: oxford|csv");
  detect->add_option("--id", cli.external_id, "external detector id");

  auto* ingest = app.add_subcommand(
      "ingest", "validate and ingest externally generated keypoint files");
  ingest->add_option("--dir", cli.external_dir,
                     "keypoint tree mirroring the scene layout");
  ingest->add_option("--format", cli.external_format, "oxford|csv");
  ingest->add_option("--id", cli.external_id, "detector id for the artifacts");
  ingest->add_option("--transform", cli.transforms,
                     "restrict to these transforms");

  auto* evaluate = app.add_subcommand(
      "evaluate", "repeatability matrices and bounds curves per detector");
  evaluate->add_option("--detector", cli.detectors,
                       "built-in detectors to evaluate");
  evaluate->add_option("--epsilon", cli.epsilon,
                       "correspondence tolerance in pixels");
  evaluate->add_option("--transform", cli.transforms,
                       "restrict to these transforms");

  auto* compare = app.add_subcommand(
      "compare", "threshold-swept McNemar Z-score grids for two detectors");
  compare->add_option("--a", cli.detector_a, "first detector id");
  compare->add_option("--b", cli.detector_b, "second detector id");
  compare->add_option("--thresholds", cli.thresholds,
                      "success thresholds, strictly increasing in (0,1)");
  compare->add_option("--transform", cli.transforms,
                      "restrict to these transforms");

  auto* report =
      app.add_subcommand("report", "aggregate run results into summary.json");
  auto* verify = app.add_subcommand(
      "verify", "check every manifest artifact exists, matches its checksum, "
                "and nothing unlisted is present");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig config = make_config(cli);
    if (synthesize->parsed()) {
      print_report(featbench::harness::cmd_synthesize(config));
    } else if (detect->parsed()) {
      if (!config.external_dir.empty()) {
        print_report(featbench::harness::cmd_ingest(config));
      } else {
        print_report(featbench::harness::cmd_detect(config));
      }
    } else if (ingest->parsed()) {
      print_report(featbench::harness::cmd_ingest(config));
    } else if (evaluate->parsed()) {
      print_report(featbench::harness::cmd_evaluate(config));
    } else if (compare->parsed()) {
      print_report(featbench::harness::cmd_compare(config));
    } else if (report->parsed()) {
      print_report(featbench::harness::cmd_report(config));
    } else if (verify->parsed()) {
      const auto issues = featbench::harness::cmd_verify(config);
      for (const auto& issue : issues) {
        const char* what =
            issue.kind == featbench::harness::VerifyIssue::kMissing
                ? "missing"
                : issue.kind ==
                      featbench::harness::VerifyIssue::kChecksumMismatch
                      ? "checksum mismatch"
                      : "unlisted";
        std::printf("[verify] %s: %s\n", what, issue.path.c_str());
      }
      if (!issues.empty()) {
        std::printf("[verify] %zu issue(s) found\n", issues.size());
        return kExitValidation;
      }
      std::printf("[verify] ok\n");
    }
    return kExitOk;
  } catch (const featbench::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const featbench::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const featbench::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
