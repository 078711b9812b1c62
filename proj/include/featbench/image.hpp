#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "featbench/errors.hpp"

namespace featbench::imaging {

/// Rounds to the nearest integer, halves away from zero, and clamps to the
/// 8-bit range. This is the single rounding rule used everywhere an 8-bit
/// result is produced.
inline std::uint8_t round_to_u8(double v) {
  const long long r = std::llround(v);
  if (r < 0) return 0;
  if (r > 255) return 255;
  return static_cast<std::uint8_t>(r);
}

/// Single-channel 8-bit raster, row-major. Immutable by convention once
/// constructed; all transforms return new images.
class Image {
 public:
  Image() = default;  // empty 0x0 placeholder; rejected by I/O and transforms

  Image(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height) {
    check_dims(width, height);
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  Image(int width, int height, std::vector<std::uint8_t> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dims(width, height);
    if (pixels_.size() != static_cast<std::size_t>(width) * height) {
      throw ValidationError("image pixel count does not match dimensions");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }
  std::size_t size() const { return pixels_.size(); }

  std::uint8_t operator()(int x, int y) const {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::uint8_t& operator()(int x, int y) {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }

  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  bool operator==(const Image&) const = default;

 private:
  static void check_dims(int width, int height) {
    if (width < 1 || height < 1) {
      throw ValidationError("zero-dimension image");
    }
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

}  // namespace featbench::imaging
