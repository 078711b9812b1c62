#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "featbench/errors.hpp"

namespace featbench::detectors {

/// Second-moment ellipse a(x-u)^2 + 2b(x-u)(y-v) + c(y-v)^2 = 1.
struct Ellipse {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Radius of the circle with the ellipse's geometric-mean axis:
/// (ac - b^2)^(-1/4). Throws unless the ellipse is positive definite.
double ellipse_scale(const Ellipse& e);

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double scale = 1.0;     // radius of the equivalent circular region
  double response = 0.0;  // detector strength, used only for ordering
  std::optional<Ellipse> ellipse;
};

struct KeypointSet {
  std::string image_ref;    // "<scene_id>/<variant_index>" downstream
  std::string detector_id;
  std::vector<Keypoint> points;
};

enum class KeypointFormat { kOxford, kCsv };

/// Reads an externally produced keypoint file.
///
/// oxford: a numeric header line (ignored), a count line, then one
/// "u v a b c" line per point (extra columns such as descriptors are
/// ignored); scale derives from the ellipse. csv: header "x,y,scale"
/// then one triple per row.
KeypointSet ingest_keypoints(const std::filesystem::path& path,
                             KeypointFormat format);

/// The csv layout as a string. Values round-trip exactly through
/// ingest_keypoints(..., kCsv).
std::string keypoints_to_csv(const KeypointSet& set);

void write_keypoints_csv(const KeypointSet& set,
                         const std::filesystem::path& path);

}  // namespace featbench::detectors
