#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "featbench/detectors.hpp"
#include "featbench/mcnemar.hpp"
#include "featbench/repeatability.hpp"
#include "featbench/transforms.hpp"

namespace featbench::harness {

/// One TOML file drives a full run; every CLI flag maps onto one of these
/// fields and wins over the file.
struct RunConfig {
  // [database] — either a directory of reference images or a synthetic set.
  std::string scenes_root;
  int synthetic_scenes = 0;
  int synthetic_size = 256;
  std::uint64_t seed = 42;

  // [transforms]
  std::vector<imaging::TransformKind> kinds = {imaging::TransformKind::kJpeg,
                                               imaging::TransformKind::kBlur,
                                               imaging::TransformKind::kBrightness};
  std::vector<double> jpeg_amounts =
      imaging::default_amounts(imaging::TransformKind::kJpeg);
  std::vector<double> blur_amounts =
      imaging::default_amounts(imaging::TransformKind::kBlur);
  std::vector<double> brightness_amounts =
      imaging::default_amounts(imaging::TransformKind::kBrightness);
  bool blur_cumulative = false;

  // [detectors]
  std::vector<std::string> builtin = {"harris", "dog"};
  detectors::HarrisParams harris;
  detectors::DogParams dog;
  std::string external_dir;
  std::string external_format = "oxford";
  std::string external_id = "external";

  // [evaluation]
  repeatability::MatchOptions match;

  // [comparison]
  std::vector<double> thresholds = mcnemar::default_thresholds();
  std::string detector_a = "harris";
  std::string detector_b = "dog";

  // [output]
  std::string out_dir = "out";
  int jobs = 0;  // 0 = all available processors

  imaging::TransformSpec spec_for(imaging::TransformKind kind) const;

  /// Detector ids participating in detect/evaluate: built-ins plus the
  /// external id when an external directory is configured.
  std::vector<std::string> detector_ids() const;

  void validate() const;

  /// Additional checks for the synthesize stage, which is the only one that
  /// needs a scene source; later stages work off the synthesized tree.
  void validate_database() const;
};

RunConfig load_config(const std::filesystem::path& path);

/// The semantic part of the config as stable JSON: everything that affects
/// artifact bytes. Output location and parallelism degree are omitted so
/// reruns at different --jobs or into different directories compare equal.
nlohmann::json config_echo(const RunConfig& config);

}  // namespace featbench::harness
