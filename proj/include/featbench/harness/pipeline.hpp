#pragma once

#include <string>
#include <vector>

#include "featbench/harness/config.hpp"
#include "featbench/harness/manifest.hpp"

namespace featbench::harness {

struct StageReport {
  std::string stage;
  bool skipped = false;  // inputs unchanged, recorded artifacts verified
  std::size_t file_count = 0;
  double elapsed_ms = 0.0;
};

// Each stage is resumable: when its input signature matches the manifest and
// every recorded artifact verifies, the stage is a no-op. Output layout:
//
//   <out>/<scene_id>/<transform>/<amount>/image.pgm [image.jpg] kp_<id>.csv
//   <out>/<scene_id>/<transform>/sequence.json
//   <out>/results/<detector>/<transform>/{matrix,curves}.csv
//                                        {excluded,areas}.json
//   <out>/results/compare_<a>_vs_<b>/<transform>/
//                                        zgrid.csv heatmap.pgm heatmap_legend.json
//   <out>/summary.json  manifest.json  timings.json
//
// External detectors run out-of-band by mirroring the scene tree.

StageReport cmd_synthesize(const RunConfig& config);
StageReport cmd_detect(const RunConfig& config);
StageReport cmd_ingest(const RunConfig& config);
StageReport cmd_evaluate(const RunConfig& config);
StageReport cmd_compare(const RunConfig& config);
StageReport cmd_report(const RunConfig& config);
std::vector<VerifyIssue> cmd_verify(const RunConfig& config);

}  // namespace featbench::harness
