#include "featbench/harness/synth.hpp"

#include <algorithm>
#include <random>

namespace featbench::harness {

imaging::Image make_synthetic_scene(int width, int height,
                                    std::uint64_t seed) {
  imaging::Image img(width, height, 128);
  std::mt19937_64 rng(seed);
  auto draw = [&rng](std::uint64_t bound) {
    return static_cast<int>(rng() % bound);
  };

  const int rect_count = 60;
  for (int r = 0; r < rect_count; ++r) {
    const int rw = 6 + draw(43);  // 6..48 px
    const int rh = 6 + draw(43);
    const int x0 = draw(static_cast<std::uint64_t>(std::max(1, width - rw)));
    const int y0 = draw(static_cast<std::uint64_t>(std::max(1, height - rh)));
    const auto value = static_cast<std::uint8_t>(draw(256));
    for (int y = y0; y < std::min(height, y0 + rh); ++y) {
      for (int x = x0; x < std::min(width, x0 + rw); ++x) {
        img(x, y) = value;
      }
    }
  }
  return img;
}

}  // namespace featbench::harness
