#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "featbench/image.hpp"

namespace fbtest {

using featbench::imaging::Image;

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("featbench_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline Image constant_image(int w, int h, std::uint8_t v) {
  return Image(w, h, v);
}

inline Image impulse_image(int size, std::uint8_t peak = 255) {
  Image img(size, size, 0);
  img(size / 2, size / 2) = peak;
  return img;
}

/// Black frame with a centered white square; corners land at
/// (off, off) .. (off+side-1, off+side-1).
inline Image square_image(int size = 64, int side = 32) {
  Image img(size, size, 0);
  const int off = (size - side) / 2;
  for (int y = off; y < off + side; ++y) {
    for (int x = off; x < off + side; ++x) img(x, y) = 255;
  }
  return img;
}

inline Image checkerboard_image(int size = 64, int cell = 8) {
  Image img(size, size, 0);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      img(x, y) = ((x / cell + y / cell) % 2 == 0) ? 255 : 0;
    }
  }
  return img;
}

/// Smooth diagonal ramp, no texture.
inline Image gradient_image(int size = 128) {
  Image img(size, size, 0);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      img(x, y) = featbench::imaging::round_to_u8(255.0 * (x + y) /
                                                  (2.0 * size - 2.0));
    }
  }
  return img;
}

inline void add_gaussian_blob(Image& img, double cx, double cy, double sigma,
                              double amplitude) {
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      const double v = img(x, y) + amplitude * std::exp(-r2 / (2 * sigma * sigma));
      img(x, y) = featbench::imaging::round_to_u8(v);
    }
  }
}

inline Image noise_image(int w, int h, unsigned seed) {
  Image img(w, h, 0);
  std::mt19937 rng(seed);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img(x, y) = static_cast<std::uint8_t>(rng() % 256);
    }
  }
  return img;
}

inline double psnr(const Image& a, const Image& b) {
  double mse = 0.0;
  for (std::size_t i = 0; i < a.pixels().size(); ++i) {
    const double d = static_cast<double>(a.pixels()[i]) - b.pixels()[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.pixels().size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace fbtest
