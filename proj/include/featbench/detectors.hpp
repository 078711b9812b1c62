#pragma once

#include "featbench/image.hpp"
#include "featbench/keypoints.hpp"

namespace featbench::detectors {

// Built-in reference detectors. Defaults are chosen for reproducibility and
// stability, not to mimic any published detector; they exist so the harness
// runs end-to-end without third-party binaries.

struct HarrisParams {
  double sigma_d = 1.0;          // derivative smoothing
  double sigma_i = 2.0;          // structure tensor integration
  double k = 0.06;               // trace weight in the corner response
  double threshold_ratio = 0.01; // response cutoff as a fraction of the max
  int nms_radius = 5;            // non-maximum suppression radius, pixels
};

/// Harris corner detector: det(M) - k*trace(M)^2 on the smoothed structure
/// tensor, local maxima above threshold after non-maximum suppression.
/// Keypoint scale is fixed at 2*sigma_i. Needs at least a 16x16 image.
KeypointSet detect_harris(const imaging::Image& img,
                          const HarrisParams& params = {});

struct DogParams {
  int octaves = 3;
  int scales_per_octave = 3;
  double contrast_threshold = 0.03;  // on responses of a [0,1]-scaled image
  double edge_ratio = 10.0;          // principal curvature ratio cutoff
};

/// Difference-of-Gaussians blob detector over a downsampled scale pyramid
/// with quadratic sub-pixel refinement. Keypoint scale is
/// 1.6 * 2^(octave + level/scales_per_octave). Needs at least 32x32.
KeypointSet detect_dog(const imaging::Image& img, const DogParams& params = {});

}  // namespace featbench::detectors
