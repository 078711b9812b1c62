#pragma once

#include <cmath>
#include <vector>

namespace featbench::internal {

/// Discrete Gaussian taps for radius ceil(4*sigma), normalized to unit sum.
/// Tail mass beyond that radius is below 1e-4 of the total.
inline std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-(static_cast<double>(i) * i) /
                              (2.0 * sigma * sigma));
    taps[i + radius] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

/// Separable Gaussian convolution on a row-major double raster; borders are
/// handled by replication. sigma == 0 leaves the field untouched.
void gaussian_smooth(std::vector<double>& field, int width, int height,
                     double sigma);

}  // namespace featbench::internal
