#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "featbench/geometry.hpp"
#include "featbench/keypoints.hpp"
#include "featbench/transforms.hpp"

namespace featbench::repeatability {

/// Raised when no reference keypoint falls in the common region; the score
/// is undefined there rather than zero, and such scenes are excluded.
class EmptyReferenceError : public ValidationError {
 public:
  explicit EmptyReferenceError(const std::string& msg)
      : ValidationError(msg) {}
};

struct MatchOptions {
  double epsilon = 4.0;     // correspondence tolerance, pixels
  bool scale_gate = false;  // optionally require similar keypoint scales
  double scale_gate_ratio = 1.5;
};

struct MatchPair {
  int ref_index = 0;
  int target_index = 0;
  double distance = 0.0;
};

struct MatchResult {
  long n_ref = 0;  // reference keypoints inside the common region
  long n_rep = 0;  // repeated (matched) keypoints
  std::vector<MatchPair> pairs;
  double score = 0.0;  // n_rep / n_ref
};

/// Projects reference keypoints through the ground-truth homography, keeps
/// those landing inside the target, and matches them one-to-one to target
/// keypoints greedily by ascending distance (ties broken by reference index,
/// then target index). A pair is a correspondence candidate when its
/// distance is at most epsilon.
MatchResult match_keypoints(const detectors::KeypointSet& ref,
                            const detectors::KeypointSet& target,
                            const geometry::Homography& h, int target_width,
                            int target_height, const MatchOptions& options);

/// The score alone: repeated points over common-region reference points.
double repeatability(const detectors::KeypointSet& ref,
                     const detectors::KeypointSet& target,
                     const geometry::Homography& h, int target_width,
                     int target_height, const MatchOptions& options);

struct VariantObservation {
  detectors::KeypointSet keypoints;
  geometry::Homography homography = geometry::Homography::identity();
  int width = 0;
  int height = 0;
};

struct SceneObservations {
  std::string scene_id;
  std::vector<VariantObservation> variants;  // [0] is the reference
};

struct ExcludedScene {
  std::string scene_id;
  std::string reason;
};

struct RepeatabilityMatrix {
  std::string detector_id;
  imaging::TransformKind kind = imaging::TransformKind::kBlur;
  std::vector<double> amounts;
  std::vector<std::string> scene_ids;       // ascending, excluded rows removed
  std::vector<std::vector<double>> scores;  // [scene][amount]
  std::vector<ExcludedScene> excluded;
};

/// Scores every scene at every amount against that scene's own reference.
/// Scenes whose reference has no keypoint in a common region are excluded
/// and recorded, not silently dropped. Rows come out sorted by scene_id no
/// matter how many workers computed them.
RepeatabilityMatrix build_matrix(const std::vector<SceneObservations>& scenes,
                                 const std::vector<double>& amounts,
                                 imaging::TransformKind kind,
                                 const std::string& detector_id,
                                 const MatchOptions& options, int jobs = 1);

// CSV layout: header "scene_id,<amount>,...", one row per scene. The
// excluded list travels in a JSON sidecar.
void write_matrix_csv(const RepeatabilityMatrix& matrix,
                      const std::filesystem::path& path);
void write_excluded_json(const RepeatabilityMatrix& matrix,
                         const std::filesystem::path& path);
RepeatabilityMatrix read_matrix_csv(const std::filesystem::path& path,
                                    const std::string& detector_id,
                                    imaging::TransformKind kind);

}  // namespace featbench::repeatability
