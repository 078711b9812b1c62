#include <algorithm>
#include <cmath>
#include <vector>

#include "featbench/detectors.hpp"
#include "internal/separable_gaussian.hpp"

namespace featbench::detectors {

namespace {

constexpr double kBaseSigma = 1.6;

struct Level {
  std::vector<double> data;
};

struct Candidate {
  double x, y, scale, response;
};

// Keep every other sample; pixel centers at even indices stay aligned, so a
// downsampled coordinate maps back as x * 2^octave.
std::vector<double> downsample(const std::vector<double>& f, int w, int h,
                               int& out_w, int& out_h) {
  out_w = (w + 1) / 2;
  out_h = (h + 1) / 2;
  std::vector<double> out(static_cast<std::size_t>(out_w) * out_h);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      out[static_cast<std::size_t>(y) * out_w + x] =
          f[static_cast<std::size_t>(2 * y) * w + 2 * x];
    }
  }
  return out;
}

// Solves the 3x3 system H * offset = -g by Cramer's rule; returns false when
// the Hessian is numerically singular.
bool solve_offset(const double hess[3][3], const double grad[3],
                  double offset[3]) {
  const double det =
      hess[0][0] * (hess[1][1] * hess[2][2] - hess[1][2] * hess[2][1]) -
      hess[0][1] * (hess[1][0] * hess[2][2] - hess[1][2] * hess[2][0]) +
      hess[0][2] * (hess[1][0] * hess[2][1] - hess[1][1] * hess[2][0]);
  if (std::abs(det) < 1e-12) return false;
  const double rhs[3] = {-grad[0], -grad[1], -grad[2]};
  for (int col = 0; col < 3; ++col) {
    double m[3][3];
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] = hess[r][c];
      m[r][col] = rhs[r];
    }
    const double d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    offset[col] = d / det;
  }
  return true;
}

}  // namespace

KeypointSet detect_dog(const imaging::Image& img, const DogParams& params) {
  if (img.width() < 32 || img.height() < 32) {
    throw ValidationError("detect_dog needs at least a 32x32 image");
  }
  if (params.octaves < 1 || params.scales_per_octave < 1 ||
      params.contrast_threshold <= 0 || params.edge_ratio < 1) {
    throw ValidationError("invalid DoG parameters");
  }
  const int s = params.scales_per_octave;
  const int full_w = img.width();
  const int full_h = img.height();

  std::vector<double> octave_base(img.pixels().begin(), img.pixels().end());
  for (double& v : octave_base) v /= 255.0;

  std::vector<Candidate> candidates;

  int w = full_w, h = full_h;
  for (int octave = 0; octave < params.octaves; ++octave) {
    if (w < 8 || h < 8) break;

    // Gaussian stack: level i sits at sigma 1.6 * 2^(i/s) relative to the
    // octave grid; incremental blurs keep each pass cheap.
    std::vector<Level> gauss(static_cast<std::size_t>(s) + 3);
    gauss[0].data = octave_base;
    if (octave == 0) {
      internal::gaussian_smooth(gauss[0].data, w, h, kBaseSigma);
    }
    for (int i = 1; i < s + 3; ++i) {
      const double sigma_prev = kBaseSigma * std::pow(2.0, (i - 1.0) / s);
      const double sigma_next = kBaseSigma * std::pow(2.0, static_cast<double>(i) / s);
      const double inc = std::sqrt(sigma_next * sigma_next - sigma_prev * sigma_prev);
      gauss[i].data = gauss[i - 1].data;
      internal::gaussian_smooth(gauss[i].data, w, h, inc);
    }

    std::vector<Level> dog(static_cast<std::size_t>(s) + 2);
    for (int i = 0; i < s + 2; ++i) {
      dog[i].data.resize(gauss[i].data.size());
      for (std::size_t p = 0; p < dog[i].data.size(); ++p) {
        dog[i].data[p] = gauss[i + 1].data[p] - gauss[i].data[p];
      }
    }

    const double octave_step = std::pow(2.0, octave);
    for (int level = 1; level <= s; ++level) {
      const auto& below = dog[level - 1].data;
      const auto& here = dog[level].data;
      const auto& above = dog[level + 1].data;
      auto at = [&](const std::vector<double>& d, int x, int y) {
        return d[static_cast<std::size_t>(y) * w + x];
      };
      for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
          const double v = at(here, x, y);
          if (std::abs(v) < params.contrast_threshold) continue;

          bool is_max = v > 0, is_min = v < 0;
          for (int dy = -1; dy <= 1 && (is_max || is_min); ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              for (const auto* plane : {&below, &here, &above}) {
                if (plane == &here && dx == 0 && dy == 0) continue;
                const double n = at(*plane, x + dx, y + dy);
                if (n >= v) is_max = false;
                if (n <= v) is_min = false;
              }
            }
          }
          if (!is_max && !is_min) continue;

          // Principal-curvature (edge) rejection on the spatial Hessian.
          const double dxx = at(here, x + 1, y) - 2 * v + at(here, x - 1, y);
          const double dyy = at(here, x, y + 1) - 2 * v + at(here, x, y - 1);
          const double dxy = 0.25 * (at(here, x + 1, y + 1) -
                                     at(here, x - 1, y + 1) -
                                     at(here, x + 1, y - 1) +
                                     at(here, x - 1, y - 1));
          const double trace = dxx + dyy;
          const double det = dxx * dyy - dxy * dxy;
          const double r = params.edge_ratio;
          if (det <= 0 || trace * trace * r >= det * (r + 1) * (r + 1)) {
            continue;
          }

          // One quadratic refinement step across (x, y, level).
          const double grad[3] = {
              0.5 * (at(here, x + 1, y) - at(here, x - 1, y)),
              0.5 * (at(here, x, y + 1) - at(here, x, y - 1)),
              0.5 * (at(above, x, y) - at(below, x, y))};
          const double dss = at(above, x, y) - 2 * v + at(below, x, y);
          const double dxs = 0.25 * (at(above, x + 1, y) - at(above, x - 1, y) -
                                     at(below, x + 1, y) + at(below, x - 1, y));
          const double dys = 0.25 * (at(above, x, y + 1) - at(above, x, y - 1) -
                                     at(below, x, y + 1) + at(below, x, y - 1));
          const double hess[3][3] = {
              {dxx, dxy, dxs}, {dxy, dyy, dys}, {dxs, dys, dss}};
          double offset[3] = {0, 0, 0};
          if (solve_offset(hess, grad, offset)) {
            for (double& o : offset) o = std::clamp(o, -0.5, 0.5);
          }

          Candidate cand;
          cand.x = (x + offset[0]) * octave_step;
          cand.y = (y + offset[1]) * octave_step;
          cand.scale = kBaseSigma *
                       std::pow(2.0, octave + (level + offset[2]) / s);
          cand.response = v;
          if (cand.x < 0 || cand.x > full_w - 1 || cand.y < 0 ||
              cand.y > full_h - 1) {
            continue;
          }
          candidates.push_back(cand);
        }
      }
    }

    int next_w = 0, next_h = 0;
    octave_base = downsample(gauss[s].data, w, h, next_w, next_h);
    w = next_w;
    h = next_h;
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              const double ra = std::abs(a.response);
              const double rb = std::abs(b.response);
              if (ra != rb) return ra > rb;
              if (a.y != b.y) return a.y < b.y;
              return a.x < b.x;
            });

  // Adjacent octave bands overlap in sigma, so the same blob can fire on both
  // sides of the seam; keep the strongest within two pixels and 1.5 pyramid
  // steps.
  const double scale_gate = std::pow(2.0, 1.5 / s);
  KeypointSet set;
  set.detector_id = "dog";
  for (const Candidate& cand : candidates) {
    bool duplicate = false;
    for (const Keypoint& kept : set.points) {
      const double dx = cand.x - kept.x;
      const double dy = cand.y - kept.y;
      const double ratio = cand.scale > kept.scale ? cand.scale / kept.scale
                                                   : kept.scale / cand.scale;
      if (dx * dx + dy * dy <= 4.0 && ratio <= scale_gate) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    Keypoint kp;
    kp.x = cand.x;
    kp.y = cand.y;
    kp.scale = cand.scale;
    kp.response = cand.response;
    set.points.push_back(kp);
  }
  return set;
}

}  // namespace featbench::detectors
