#pragma once

#include <array>
#include <filesystem>

#include "featbench/errors.hpp"

namespace featbench::geometry {

struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
};

/// 3x3 projective transform, row-major. Coordinate convention across the
/// project: origin at the top-left pixel center, x rightward, y downward.
class Homography {
 public:
  /// Validates invertibility: after normalizing the largest-magnitude entry
  /// to 1, |det| must exceed 1e-12.
  static Homography from_row_major(const std::array<double, 9>& entries);
  static Homography identity();

  double at(int row, int col) const { return entries_[row * 3 + col]; }
  const std::array<double, 9>& entries() const { return entries_; }

  Homography inverse() const;
  bool is_identity() const;

 private:
  Homography() = default;
  std::array<double, 9> entries_{1, 0, 0, 0, 1, 0, 0, 0, 1};
};

/// Applies h to p and dehomogenizes. Throws ValidationError when the point
/// maps to infinity (|w| < 1e-12).
PlanarPoint project_point(const Homography& h, PlanarPoint p);

/// True iff p, projected by h, lands inside [0, target_w-1] x [0, target_h-1].
/// The caller guarantees p lies within the reference image bounds.
bool common_region_contains(const Homography& h, int ref_width, int ref_height,
                            int target_width, int target_height, PlanarPoint p);

/// Reads the common plain-text layout: 9 whitespace-separated numbers over
/// three lines.
Homography read_homography_text(const std::filesystem::path& path);

}  // namespace featbench::geometry
