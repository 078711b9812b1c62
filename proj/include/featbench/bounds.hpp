#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "featbench/repeatability.hpp"

namespace featbench::bounds {

/// Upper/lower/typical performance curves over transformation amounts, plus
/// the numeric region summaries. The guarantee region is the area under the
/// min curve; the operating region is the band between max and min. Areas
/// are trapezoid integrals over the amount axis rescaled to [0,1].
struct BoundsCurves {
  std::vector<double> amounts;
  std::vector<double> max_curve;
  std::vector<double> min_curve;
  std::vector<double> median_curve;
  double operating_area = 0.0;
  double guarantee_area = 0.0;
};

// Per-column order statistics over all scenes. An even scene count medians
// to the mean of the two middle values.
std::vector<double> max_curve(const repeatability::RepeatabilityMatrix& m);
std::vector<double> min_curve(const repeatability::RepeatabilityMatrix& m);
std::vector<double> median_curve(const repeatability::RepeatabilityMatrix& m);

/// (operating_area, guarantee_area). Needs at least two amounts.
std::pair<double, double> region_areas(const BoundsCurves& curves);

/// All three curves plus areas in one pass.
BoundsCurves compute_bounds(const repeatability::RepeatabilityMatrix& m);

/// CSV with header "amount,max,median,min".
void write_curves_csv(const BoundsCurves& curves,
                      const std::filesystem::path& path);
BoundsCurves read_curves_csv(const std::filesystem::path& path);

}  // namespace featbench::bounds
