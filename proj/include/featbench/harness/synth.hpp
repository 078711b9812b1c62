#pragma once

#include <cstdint>

#include "featbench/image.hpp"

namespace featbench::harness {

/// Deterministic textured test scene: opaque random rectangles over a mid
/// gray background. Rectangle corners give the built-in detectors plenty to
/// find and blur degrades them progressively. Raw engine draws are reduced
/// by modulo so the raster depends only on the seed, not on any standard
/// library's distribution implementation.
imaging::Image make_synthetic_scene(int width, int height, std::uint64_t seed);

}  // namespace featbench::harness
