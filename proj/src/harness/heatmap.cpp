#include "featbench/harness/heatmap.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "featbench/image_io.hpp"

namespace featbench::harness {

namespace {

// +-5 covers every Z magnitude meaningful at the 99.9999% level.
constexpr double kClamp = 5.0;

}  // namespace

imaging::Image render_heatmap(const mcnemar::ZScoreGrid& grid) {
  const int h = static_cast<int>(grid.thresholds.size());
  const int w = static_cast<int>(grid.amounts.size());
  imaging::Image img(w, h, 128);
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      if (!grid.reliable[row][col]) {
        img(col, row) = 128;  // the z = 0 midpoint
        continue;
      }
      const double z = std::clamp(grid.z[row][col], -kClamp, kClamp);
      img(col, row) = imaging::round_to_u8((z + kClamp) / (2 * kClamp) * 255.0);
    }
  }
  return img;
}

void emit_heatmap(const mcnemar::ZScoreGrid& grid,
                  const std::filesystem::path& pgm_path,
                  const std::filesystem::path& legend_path) {
  imaging::save_pgm(render_heatmap(grid), pgm_path);

  nlohmann::json legend;
  legend["detector_a"] = grid.detector_a;
  legend["detector_b"] = grid.detector_b;
  legend["rows"] = "thresholds ascending top to bottom";
  legend["columns"] = "amounts ascending left to right";
  legend["thresholds"] = grid.thresholds;
  legend["amounts"] = grid.amounts;
  legend["clamp"] = kClamp;
  legend["value_mapping"] =
      "pixel = round(255 * (clamp(z, -5, 5) + 5) / 10); z = 0 maps to 128; "
      "positive z (first detector better) maps brighter";
  legend["unreliable_value"] = 128;
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t row = 0; row < grid.thresholds.size(); ++row) {
    for (std::size_t col = 0; col < grid.amounts.size(); ++col) {
      if (!grid.reliable[row][col]) {
        cells.push_back({{"threshold", grid.thresholds[row]},
                         {"amount", grid.amounts[col]}});
      }
    }
  }
  legend["unreliable_cells"] = std::move(cells);

  std::ofstream out(legend_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write legend: " + legend_path.string());
  out << legend.dump(2) << '\n';
  if (!out) throw IoError("legend write failed: " + legend_path.string());
}

}  // namespace featbench::harness
