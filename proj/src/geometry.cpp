#include "featbench/geometry.hpp"

#include <cmath>
#include <fstream>

namespace featbench::geometry {

namespace {

constexpr double kWTolerance = 1e-12;
constexpr double kDetTolerance = 1e-12;

double det3(const std::array<double, 9>& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) -
         m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

}  // namespace

Homography Homography::from_row_major(const std::array<double, 9>& entries) {
  double largest = 0.0;
  for (double e : entries) {
    if (!std::isfinite(e)) {
      throw ValidationError("homography entries must be finite");
    }
    largest = std::max(largest, std::abs(e));
  }
  if (largest == 0.0) throw ValidationError("homography is all zeros");

  std::array<double, 9> scaled = entries;
  for (double& e : scaled) e /= largest;
  if (std::abs(det3(scaled)) <= kDetTolerance) {
    throw ValidationError("homography is not invertible");
  }

  Homography h;
  h.entries_ = entries;
  return h;
}

Homography Homography::identity() { return Homography(); }

bool Homography::is_identity() const {
  static const std::array<double, 9> kIdentity{1, 0, 0, 0, 1, 0, 0, 0, 1};
  return entries_ == kIdentity;
}

Homography Homography::inverse() const {
  const auto& m = entries_;
  const double det = det3(m);
  // Construction guarantees invertibility up to the normalized tolerance;
  // a zero determinant here means numbers degraded since then.
  if (std::abs(det) < kDetTolerance * 1e-3) {
    throw ValidationError("homography inverse is numerically singular");
  }
  std::array<double, 9> adj{
      m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8],
      m[1] * m[5] - m[2] * m[4], m[5] * m[6] - m[3] * m[8],
      m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
      m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7],
      m[0] * m[4] - m[1] * m[3]};
  for (double& e : adj) e /= det;
  return from_row_major(adj);
}

PlanarPoint project_point(const Homography& h, PlanarPoint p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw ValidationError("cannot project non-finite point");
  }
  const auto& m = h.entries();
  const double xh = m[0] * p.x + m[1] * p.y + m[2];
  const double yh = m[3] * p.x + m[4] * p.y + m[5];
  const double w = m[6] * p.x + m[7] * p.y + m[8];
  if (std::abs(w) < kWTolerance) {
    throw ValidationError("point maps to infinity under homography");
  }
  return {xh / w, yh / w};
}

bool common_region_contains(const Homography& h, int /*ref_width*/,
                            int /*ref_height*/, int target_width,
                            int target_height, PlanarPoint p) {
  const PlanarPoint q = project_point(h, p);
  return q.x >= 0.0 && q.x <= target_width - 1.0 && q.y >= 0.0 &&
         q.y <= target_height - 1.0;
}

Homography read_homography_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("unreadable homography file: " + path.string());
  std::array<double, 9> entries{};
  for (double& e : entries) {
    if (!(in >> e)) {
      throw ValidationError("homography file needs 9 numbers: " +
                            path.string());
    }
  }
  return Homography::from_row_major(entries);
}

}  // namespace featbench::geometry
