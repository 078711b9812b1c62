#include "featbench/transforms.hpp"

#include <cmath>

#include "featbench/image_io.hpp"
#include "internal/separable_gaussian.hpp"

namespace featbench::imaging {

namespace {

constexpr double kJpegMaxRatio = 98.0;
constexpr double kBlurMaxSigma = 8.0;
constexpr double kBrightnessMaxDecrease = 99.0;

void require_nonempty(const Image& img) {
  if (img.empty()) throw ValidationError("transform input image is empty");
}

double kind_max_amount(TransformKind kind) {
  switch (kind) {
    case TransformKind::kJpeg:
      return kJpegMaxRatio;
    case TransformKind::kBlur:
      return kBlurMaxSigma;
    case TransformKind::kBrightness:
      return kBrightnessMaxDecrease;
  }
  throw InternalError("unhandled transform kind");
}

}  // namespace

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::kJpeg:
      return "jpeg";
    case TransformKind::kBlur:
      return "blur";
    case TransformKind::kBrightness:
      return "brightness";
  }
  throw InternalError("unhandled transform kind");
}

TransformKind transform_kind_from_string(const std::string& name) {
  if (name == "jpeg") return TransformKind::kJpeg;
  if (name == "blur") return TransformKind::kBlur;
  if (name == "brightness") return TransformKind::kBrightness;
  throw ValidationError("unknown transform kind: " + name);
}

std::vector<double> default_amounts(TransformKind kind) {
  switch (kind) {
    case TransformKind::kJpeg:
      // 14 steps, denser at the high-compression end.
      return {0, 10, 20, 30, 40, 50, 60, 70, 80, 85, 90, 93, 95, 98};
    case TransformKind::kBlur:
      // 10 steps of 0.5 plus the untransformed reference.
      return {0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5};
    case TransformKind::kBrightness:
      // 14 steps from 0% to 90%, fine-grained at low amounts.
      return {0, 5, 10, 15, 20, 25, 30, 35, 40, 50, 60, 70, 80, 90};
  }
  throw InternalError("unhandled transform kind");
}

TransformSpec TransformSpec::with_default_amounts(TransformKind kind) {
  TransformSpec spec;
  spec.kind = kind;
  spec.amounts = default_amounts(kind);
  return spec;
}

void TransformSpec::validate() const {
  if (amounts.empty()) throw ValidationError("transform spec has no amounts");
  if (amounts.front() != 0.0) {
    throw ValidationError("first transform amount must be 0 (the reference)");
  }
  const double max_amount = kind_max_amount(kind);
  double prev = -1.0;
  for (double a : amounts) {
    if (!std::isfinite(a) || a < 0.0 || a > max_amount) {
      throw ValidationError("transform amount out of range for " +
                            to_string(kind) + ": " + std::to_string(a));
    }
    if (a <= prev) {
      throw ValidationError("transform amounts must be strictly increasing");
    }
    prev = a;
  }
  if (kind == TransformKind::kJpeg) {
    for (double a : amounts) {
      if (a != std::floor(a)) {
        throw ValidationError(
            "jpeg compression ratios must be whole percentages");
      }
    }
  }
}

Image jpeg_transform(const Image& img, double compression_ratio) {
  require_nonempty(img);
  if (!std::isfinite(compression_ratio) || compression_ratio < 0.0 ||
      compression_ratio > kJpegMaxRatio) {
    throw ValidationError("ratio out of range [0,98]: " +
                          std::to_string(compression_ratio));
  }
  if (compression_ratio != std::floor(compression_ratio)) {
    throw ValidationError("jpeg compression ratio must be a whole percentage");
  }
  if (compression_ratio == 0.0) return img;

  const int quality = 100 - static_cast<int>(compression_ratio);
  const auto bytes = jpeg_encode(img, quality);
  Image out = jpeg_decode(bytes);
  internal_check(out.width() == img.width() && out.height() == img.height(),
                 "jpeg round trip changed image dimensions");
  return out;
}

Image blur_transform(const Image& img, double sigma) {
  require_nonempty(img);
  if (!std::isfinite(sigma) || sigma < 0.0 || sigma > kBlurMaxSigma) {
    throw ValidationError("blur sigma out of range [0,8]: " +
                          std::to_string(sigma));
  }
  if (sigma == 0.0) return img;

  std::vector<double> field(img.pixels().begin(), img.pixels().end());
  internal::gaussian_smooth(field, img.width(), img.height(), sigma);

  std::vector<std::uint8_t> out(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) out[i] = round_to_u8(field[i]);
  return Image(img.width(), img.height(), std::move(out));
}

Image brightness_transform(const Image& img, double decrease_percent) {
  require_nonempty(img);
  if (!std::isfinite(decrease_percent) || decrease_percent < 0.0 ||
      decrease_percent > kBrightnessMaxDecrease) {
    throw ValidationError("brightness decrease out of range [0,99]: " +
                          std::to_string(decrease_percent));
  }
  if (decrease_percent == 0.0) return img;

  // v * (100 - d) / 100 rather than v * (1 - d/100): the former stays exact
  // for integral pixel values and whole-percent decreases, so boundary halves
  // like 255 at 90% (25.5) round the specified way.
  const double keep = 100.0 - decrease_percent;
  std::vector<std::uint8_t> out(img.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = round_to_u8(img.pixels()[i] * keep / 100.0);
  }
  return Image(img.width(), img.height(), std::move(out));
}

SceneSequence synthesize_sequence(const Image& reference,
                                  const TransformSpec& spec,
                                  const std::string& scene_id) {
  require_nonempty(reference);
  spec.validate();

  SceneSequence seq;
  seq.scene_id = scene_id;
  seq.kind = spec.kind;
  seq.variants.reserve(spec.amounts.size());

  const bool cumulative =
      spec.blur_cumulative && spec.kind == TransformKind::kBlur;
  double accumulated_var = 0.0;  // sum of squared sigmas under cumulative blur

  for (std::size_t i = 0; i < spec.amounts.size(); ++i) {
    const double amount = spec.amounts[i];
    SceneVariant variant;
    variant.amount = amount;
    variant.homography = geometry::Homography::identity();

    switch (spec.kind) {
      case TransformKind::kJpeg:
        variant.image = jpeg_transform(reference, amount);
        variant.effective_amount = amount;
        break;
      case TransformKind::kBrightness:
        variant.image = brightness_transform(reference, amount);
        variant.effective_amount = amount;
        break;
      case TransformKind::kBlur:
        if (cumulative && i > 0) {
          variant.image = blur_transform(seq.variants.back().image, amount);
          accumulated_var += amount * amount;
          variant.effective_amount = std::sqrt(accumulated_var);
        } else {
          variant.image = blur_transform(reference, amount);
          variant.effective_amount = amount;
        }
        break;
    }
    seq.variants.push_back(std::move(variant));
  }
  return seq;
}

}  // namespace featbench::imaging
