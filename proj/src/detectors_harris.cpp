#include <algorithm>
#include <cmath>
#include <vector>

#include "featbench/detectors.hpp"
#include "internal/separable_gaussian.hpp"

namespace featbench::detectors {

namespace {

// Central-difference gradients with replicated borders.
void gradients(const std::vector<double>& f, int w, int h,
               std::vector<double>& gx, std::vector<double>& gy) {
  gx.resize(f.size());
  gy.resize(f.size());
  auto at = [&](int x, int y) {
    x = std::clamp(x, 0, w - 1);
    y = std::clamp(y, 0, h - 1);
    return f[static_cast<std::size_t>(y) * w + x];
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      gx[i] = 0.5 * (at(x + 1, y) - at(x - 1, y));
      gy[i] = 0.5 * (at(x, y + 1) - at(x, y - 1));
    }
  }
}

}  // namespace

KeypointSet detect_harris(const imaging::Image& img,
                          const HarrisParams& params) {
  if (img.width() < 16 || img.height() < 16) {
    throw ValidationError("detect_harris needs at least a 16x16 image");
  }
  if (params.sigma_d <= 0 || params.sigma_i <= 0 || params.nms_radius < 1 ||
      params.threshold_ratio <= 0) {
    throw ValidationError("invalid Harris parameters");
  }
  const int w = img.width();
  const int h = img.height();

  std::vector<double> f(img.pixels().begin(), img.pixels().end());
  for (double& v : f) v /= 255.0;
  internal::gaussian_smooth(f, w, h, params.sigma_d);

  std::vector<double> gx, gy;
  gradients(f, w, h, gx, gy);

  std::vector<double> ixx(f.size()), iyy(f.size()), ixy(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    ixx[i] = gx[i] * gx[i];
    iyy[i] = gy[i] * gy[i];
    ixy[i] = gx[i] * gy[i];
  }
  internal::gaussian_smooth(ixx, w, h, params.sigma_i);
  internal::gaussian_smooth(iyy, w, h, params.sigma_i);
  internal::gaussian_smooth(ixy, w, h, params.sigma_i);

  std::vector<double> response(f.size());
  double max_response = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double det = ixx[i] * iyy[i] - ixy[i] * ixy[i];
    const double trace = ixx[i] + iyy[i];
    response[i] = det - params.k * trace * trace;
    max_response = std::max(max_response, response[i]);
  }

  KeypointSet set;
  set.detector_id = "harris";
  if (max_response <= 0.0) return set;  // flat image, no corners anywhere

  const double threshold = params.threshold_ratio * max_response;
  const int radius = params.nms_radius;
  const int radius_sq = radius * radius;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double r = response[static_cast<std::size_t>(y) * w + x];
      if (r < threshold) continue;
      // Maximum over the Euclidean disk; response ties keep the first point
      // in scan order so plateaus yield exactly one detection.
      bool is_max = true;
      for (int dy = -radius; dy <= radius && is_max; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= h) continue;
        for (int dx = -radius; dx <= radius; ++dx) {
          if (dx * dx + dy * dy > radius_sq || (dx == 0 && dy == 0)) continue;
          const int xx = x + dx;
          if (xx < 0 || xx >= w) continue;
          const double rn = response[static_cast<std::size_t>(yy) * w + xx];
          if (rn > r || (rn == r && (yy < y || (yy == y && xx < x)))) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) continue;
      Keypoint kp;
      kp.x = x;
      kp.y = y;
      kp.scale = 2.0 * params.sigma_i;
      kp.response = r;
      set.points.push_back(kp);
    }
  }

  std::stable_sort(set.points.begin(), set.points.end(),
                   [](const Keypoint& a, const Keypoint& b) {
                     if (a.response != b.response) return a.response > b.response;
                     if (a.y != b.y) return a.y < b.y;
                     return a.x < b.x;
                   });
  return set;
}

}  // namespace featbench::detectors
