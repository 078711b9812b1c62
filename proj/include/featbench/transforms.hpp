#pragma once

#include <string>
#include <vector>

#include "featbench/geometry.hpp"
#include "featbench/image.hpp"

namespace featbench::imaging {

enum class TransformKind { kJpeg, kBlur, kBrightness };

std::string to_string(TransformKind kind);
TransformKind transform_kind_from_string(const std::string& name);

/// A transformation sweep: the ordered amounts at which variants of a scene
/// are produced. Amount 0 (the untransformed reference) always comes first.
struct TransformSpec {
  TransformKind kind = TransformKind::kBlur;
  std::vector<double> amounts;
  // Blur only: when set, each variant is blurred on top of the previous one
  // instead of from the original; effective sigmas then accumulate as the
  // root sum of squares.
  bool blur_cumulative = false;

  static TransformSpec with_default_amounts(TransformKind kind);

  /// Throws ValidationError unless amounts are strictly increasing, start at
  /// 0, and lie in the kind's range (jpeg [0,98], blur [0,8], light [0,99]).
  void validate() const;
};

std::vector<double> default_amounts(TransformKind kind);

/// Baseline JPEG round trip at quality = 100 - compression_ratio. Ratio 0
/// returns a bit-identical copy without a codec pass. Ratios must be whole
/// percentages since the encoder quality knob is integral.
Image jpeg_transform(const Image& img, double compression_ratio);

/// Gaussian blur with kernel radius ceil(4*sigma), unit-sum normalized taps,
/// replicated borders, and a single half-away-from-zero rounding at the end.
/// Sigma 0 returns an identical copy.
Image blur_transform(const Image& img, double sigma);

/// Scales every pixel by (1 - decrease/100), rounded half away from zero.
Image brightness_transform(const Image& img, double decrease_percent);

struct SceneVariant {
  double amount = 0.0;
  // Equals amount except under cumulative blur, where it is the root sum of
  // squares of the sigmas applied so far.
  double effective_amount = 0.0;
  Image image;
  geometry::Homography homography = geometry::Homography::identity();
};

struct SceneSequence {
  std::string scene_id;
  TransformKind kind = TransformKind::kBlur;
  std::vector<SceneVariant> variants;  // [0] is the reference (amount 0)

  const Image& reference() const { return variants.front().image; }
};

/// Produces one variant per amount in the spec, each from the reference (or
/// chained, for cumulative blur). Synthesized ground-truth homographies are
/// all the identity: none of the three transforms moves pixels.
SceneSequence synthesize_sequence(const Image& reference,
                                  const TransformSpec& spec,
                                  const std::string& scene_id);

}  // namespace featbench::imaging
