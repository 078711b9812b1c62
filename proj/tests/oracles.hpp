#pragma once

// Independent reference implementations used to derive expected values.
// Deliberately naive: direct 2-D convolutions, exhaustive scans, and
// augmenting-path matching, sharing no code with the library payloads they
// check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "featbench/image.hpp"

namespace fbtest::oracle {

using featbench::imaging::Image;

/// Direct 2-D Gaussian convolution (no separability), replicated borders,
/// kernel radius ceil(4*sigma), normalized over the full grid.
inline std::vector<double> gaussian_2d(const std::vector<double>& f, int w,
                                       int h, double sigma) {
  if (sigma <= 0) return f;
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> kernel((2 * radius + 1) * (2 * radius + 1));
  double total = 0.0;
  for (int j = -radius; j <= radius; ++j) {
    for (int i = -radius; i <= radius; ++i) {
      const double wgt = std::exp(-(i * i + j * j) / (2.0 * sigma * sigma));
      kernel[(j + radius) * (2 * radius + 1) + (i + radius)] = wgt;
      total += wgt;
    }
  }
  for (double& k : kernel) k /= total;

  std::vector<double> out(f.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int j = -radius; j <= radius; ++j) {
        for (int i = -radius; i <= radius; ++i) {
          const int xx = std::clamp(x + i, 0, w - 1);
          const int yy = std::clamp(y + j, 0, h - 1);
          acc += kernel[(j + radius) * (2 * radius + 1) + (i + radius)] *
                 f[static_cast<std::size_t>(yy) * w + xx];
        }
      }
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  return out;
}

inline std::vector<double> to_field(const Image& img, double scale = 1.0) {
  std::vector<double> f(img.pixels().begin(), img.pixels().end());
  for (double& v : f) v *= scale;
  return f;
}

/// Harris response map recomputed from scratch with 2-D convolutions.
inline std::vector<double> harris_response(const Image& img, double sigma_d,
                                           double sigma_i, double k) {
  const int w = img.width(), h = img.height();
  std::vector<double> f = to_field(img, 1.0 / 255.0);
  f = gaussian_2d(f, w, h, sigma_d);

  auto at = [&](int x, int y) {
    return f[static_cast<std::size_t>(std::clamp(y, 0, h - 1)) * w +
             std::clamp(x, 0, w - 1)];
  };
  std::vector<double> ixx(f.size()), iyy(f.size()), ixy(f.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = 0.5 * (at(x + 1, y) - at(x - 1, y));
      const double gy = 0.5 * (at(x, y + 1) - at(x, y - 1));
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      ixx[i] = gx * gx;
      iyy[i] = gy * gy;
      ixy[i] = gx * gy;
    }
  }
  ixx = gaussian_2d(ixx, w, h, sigma_i);
  iyy = gaussian_2d(iyy, w, h, sigma_i);
  ixy = gaussian_2d(ixy, w, h, sigma_i);

  std::vector<double> response(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double det = ixx[i] * iyy[i] - ixy[i] * ixy[i];
    const double tr = ixx[i] + iyy[i];
    response[i] = det - k * tr * tr;
  }
  return response;
}

struct GridPoint {
  int x, y;
  double value;
};

/// Brute scan for local maxima above threshold under a Euclidean-disk
/// non-maximum rule (ties keep the first point in scan order).
inline std::vector<GridPoint> scan_maxima(const std::vector<double>& response,
                                          int w, int h, double threshold,
                                          int radius) {
  std::vector<GridPoint> maxima;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = response[static_cast<std::size_t>(y) * w + x];
      if (v < threshold) continue;
      bool best = true;
      for (int dy = -radius; dy <= radius && best; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (dx * dx + dy * dy > radius * radius) continue;
          const int xx = x + dx, yy = y + dy;
          if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
          const double n = response[static_cast<std::size_t>(yy) * w + xx];
          if (n > v || (n == v && (yy < y || (yy == y && xx < x)))) {
            best = false;
            break;
          }
        }
      }
      if (best) maxima.push_back({x, y, v});
    }
  }
  return maxima;
}

struct ScaleSpacePoint {
  int x, y;
  double sigma;
  double value;
};

/// Full-resolution difference-of-Gaussians scan over an absolute sigma
/// ladder; no octaves, no shortcuts. Returns the strongest |DoG| sample.
inline ScaleSpacePoint scan_dog_extremum(const Image& img,
                                         const std::vector<double>& sigmas) {
  const int w = img.width(), h = img.height();
  const std::vector<double> base = to_field(img, 1.0 / 255.0);
  ScaleSpacePoint best{0, 0, 0.0, 0.0};
  std::vector<double> prev = gaussian_2d(base, w, h, sigmas.front());
  for (std::size_t s = 1; s < sigmas.size(); ++s) {
    std::vector<double> next = gaussian_2d(base, w, h, sigmas[s]);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        const double d = next[i] - prev[i];
        if (std::abs(d) > std::abs(best.value)) {
          best = {x, y, sigmas[s - 1], d};
        }
      }
    }
    prev = std::move(next);
  }
  return best;
}

struct MatchInstance {
  std::vector<std::pair<double, double>> ref;
  std::vector<std::pair<double, double>> target;
  double epsilon;
};

/// Naive re-execution of the greedy rule: repeatedly scan all remaining
/// pairs for the global minimum by (distance, ref index, target index).
inline int greedy_match_count(const MatchInstance& instance) {
  std::vector<bool> ref_used(instance.ref.size(), false);
  std::vector<bool> target_used(instance.target.size(), false);
  int matched = 0;
  while (true) {
    double best_d = std::numeric_limits<double>::infinity();
    int best_i = -1, best_j = -1;
    for (std::size_t i = 0; i < instance.ref.size(); ++i) {
      if (ref_used[i]) continue;
      for (std::size_t j = 0; j < instance.target.size(); ++j) {
        if (target_used[j]) continue;
        const double dx = instance.ref[i].first - instance.target[j].first;
        const double dy = instance.ref[i].second - instance.target[j].second;
        const double d = std::sqrt(dx * dx + dy * dy);
        if (d > instance.epsilon) continue;
        if (d < best_d || (d == best_d && (static_cast<int>(i) < best_i ||
                                           (static_cast<int>(i) == best_i &&
                                            static_cast<int>(j) < best_j)))) {
          best_d = d;
          best_i = static_cast<int>(i);
          best_j = static_cast<int>(j);
        }
      }
    }
    if (best_i < 0) break;
    ref_used[best_i] = true;
    target_used[best_j] = true;
    ++matched;
  }
  return matched;
}

/// Exact maximum bipartite matching via augmenting paths on the <= epsilon
/// candidate graph.
inline int max_bipartite_count(const MatchInstance& instance) {
  const int n = static_cast<int>(instance.ref.size());
  const int m = static_cast<int>(instance.target.size());
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double dx = instance.ref[i].first - instance.target[j].first;
      const double dy = instance.ref[i].second - instance.target[j].second;
      if (std::sqrt(dx * dx + dy * dy) <= instance.epsilon) {
        adj[i].push_back(j);
      }
    }
  }
  std::vector<int> match_of_target(m, -1);
  std::vector<bool> visited;
  std::function<bool(int)> augment = [&](int i) -> bool {
    for (int j : adj[i]) {
      if (visited[j]) continue;
      visited[j] = true;
      if (match_of_target[j] < 0 || augment(match_of_target[j])) {
        match_of_target[j] = i;
        return true;
      }
    }
    return false;
  };
  int matched = 0;
  for (int i = 0; i < n; ++i) {
    visited.assign(m, false);
    if (augment(i)) ++matched;
  }
  return matched;
}

/// True when every reference point with a candidate has a strictly unique
/// nearest target whose own strictly unique nearest reference is that point.
inline bool mutual_nearest_unique(const MatchInstance& instance) {
  const auto dist = [&](std::size_t i, std::size_t j) {
    const double dx = instance.ref[i].first - instance.target[j].first;
    const double dy = instance.ref[i].second - instance.target[j].second;
    return std::sqrt(dx * dx + dy * dy);
  };
  for (std::size_t i = 0; i < instance.ref.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_j = -1;
    bool tie = false;
    for (std::size_t j = 0; j < instance.target.size(); ++j) {
      const double d = dist(i, j);
      if (d > instance.epsilon) continue;
      if (d < best) {
        best = d;
        best_j = static_cast<int>(j);
        tie = false;
      } else if (d == best) {
        tie = true;
      }
    }
    if (best_j < 0) continue;  // no candidates at all
    if (tie) return false;
    // The nearest target must point straight back.
    double back_best = std::numeric_limits<double>::infinity();
    int back_i = -1;
    bool back_tie = false;
    for (std::size_t i2 = 0; i2 < instance.ref.size(); ++i2) {
      const double d = dist(i2, best_j);
      if (d > instance.epsilon) continue;
      if (d < back_best) {
        back_best = d;
        back_i = static_cast<int>(i2);
        back_tie = false;
      } else if (d == back_best) {
        back_tie = true;
      }
    }
    if (back_tie || back_i != static_cast<int>(i)) return false;
  }
  return true;
}

}  // namespace fbtest::oracle
