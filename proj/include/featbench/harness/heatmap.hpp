#pragma once

#include <filesystem>

#include "featbench/image.hpp"
#include "featbench/mcnemar.hpp"

namespace featbench::harness {

/// One pixel per grid cell: thresholds ascending top to bottom, amounts
/// ascending left to right. Signed z is clamped to [-5, +5] and mapped
/// affinely onto [0, 255], so z = 0 lands on 128; unreliable cells render
/// at 128 and are listed in the legend sidecar.
imaging::Image render_heatmap(const mcnemar::ZScoreGrid& grid);

/// Writes the heatmap PGM plus a JSON legend describing the value mapping
/// and enumerating unreliable cells.
void emit_heatmap(const mcnemar::ZScoreGrid& grid,
                  const std::filesystem::path& pgm_path,
                  const std::filesystem::path& legend_path);

}  // namespace featbench::harness
