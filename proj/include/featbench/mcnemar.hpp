#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "featbench/repeatability.hpp"

namespace featbench::mcnemar {

/// Success iff the repeatability score reaches the threshold. Equality
/// counts as success, which keeps the threshold-0 limit degenerate (every
/// scene succeeds for both detectors).
bool outcome(double score, double threshold);

struct McNemarCounts {
  long n_sf = 0;  // first detector succeeds, second fails
  long n_fs = 0;  // first fails, second succeeds
  long n_ss = 0;
  long n_ff = 0;
};

struct McNemarResult {
  // (|n_sf - n_fs| - 1) / sqrt(n_sf + n_fs), clamped at zero where the
  // continuity correction would push it negative.
  double magnitude = 0.0;
  int sign = 0;        // sign(n_sf - n_fs)
  bool reliable = false;  // discordant count >= 30
};

McNemarResult mcnemar_z(const McNemarCounts& counts);

/// Two-tailed normal probability 2*(1 - Phi(z)), via the complementary
/// error function; absolute error well under 1e-7.
double z_to_p(double z_magnitude);

std::vector<double> default_thresholds();  // 0.10 .. 0.90 step 0.10

struct ZScoreGrid {
  std::string detector_a;
  std::string detector_b;
  imaging::TransformKind kind = imaging::TransformKind::kBlur;
  std::vector<double> thresholds;  // rows
  std::vector<double> amounts;     // columns
  // Row-major [threshold][amount]. z carries the sign convention: positive
  // means detector_a outperformed detector_b in that cell.
  std::vector<std::vector<double>> z;
  std::vector<std::vector<std::uint8_t>> reliable;
  std::vector<std::vector<double>> p;  // NaN where not reliable
  std::vector<std::vector<McNemarCounts>> counts;
  std::size_t scene_count = 0;
};

/// Sweeps the success threshold over both matrices and fills a signed
/// Z-score per (threshold, amount) cell. The matrices must agree on amounts;
/// scenes are intersected by id (each matrix may have excluded scenes the
/// other kept).
ZScoreGrid z_grid(const repeatability::RepeatabilityMatrix& matrix_a,
                  const repeatability::RepeatabilityMatrix& matrix_b,
                  const std::vector<double>& thresholds);

/// CSV with header "threshold,amount,z,reliable,p,n_sf,n_fs,n_ss,n_ff";
/// p is left empty on unreliable cells.
void write_zgrid_csv(const ZScoreGrid& grid, const std::filesystem::path& path);

}  // namespace featbench::mcnemar
