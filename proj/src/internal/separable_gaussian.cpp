#include "internal/separable_gaussian.hpp"

#include <algorithm>

namespace featbench::internal {

namespace {

inline int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

}  // namespace

void gaussian_smooth(std::vector<double>& field, int width, int height,
                     double sigma) {
  if (sigma <= 0.0) return;
  const std::vector<double> taps = gaussian_kernel(sigma);
  const int radius = static_cast<int>(taps.size() / 2);

  std::vector<double> tmp(field.size());

  // Horizontal pass: field -> tmp.
  for (int y = 0; y < height; ++y) {
    const double* row = field.data() + static_cast<std::size_t>(y) * width;
    double* out = tmp.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) {
        acc += taps[t + radius] * row[clamp_index(x + t, width)];
      }
      out[x] = acc;
    }
  }

  // Vertical pass: tmp -> field.
  for (int y = 0; y < height; ++y) {
    double* out = field.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) {
        const int yy = clamp_index(y + t, height);
        acc += taps[t + radius] * tmp[static_cast<std::size_t>(yy) * width + x];
      }
      out[x] = acc;
    }
  }
}

}  // namespace featbench::internal
