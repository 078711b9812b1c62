#include "featbench/mcnemar.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "internal/numeric_text.hpp"

namespace featbench::mcnemar {

namespace {

using internal::format_double;

constexpr long kReliableDiscordant = 30;

}  // namespace

bool outcome(double score, double threshold) {
  if (score < 0.0 || score > 1.0 || threshold < 0.0 || threshold > 1.0) {
    throw ValidationError("outcome arguments must lie in [0,1]");
  }
  return score >= threshold;
}

McNemarResult mcnemar_z(const McNemarCounts& counts) {
  if (counts.n_sf < 0 || counts.n_fs < 0 || counts.n_ss < 0 ||
      counts.n_ff < 0) {
    throw ValidationError("negative McNemar counts");
  }
  McNemarResult result;
  const long discordant = counts.n_sf + counts.n_fs;
  result.reliable = discordant >= kReliableDiscordant;
  const long diff = counts.n_sf - counts.n_fs;
  result.sign = diff > 0 ? 1 : diff < 0 ? -1 : 0;
  if (discordant > 0) {
    // Continuity correction; clamp where |diff| < 1 would go negative.
    const double numerator = std::max(0.0, std::abs(static_cast<double>(diff)) - 1.0);
    result.magnitude = numerator / std::sqrt(static_cast<double>(discordant));
  }
  return result;
}

double z_to_p(double z_magnitude) {
  if (z_magnitude < 0 || !std::isfinite(z_magnitude)) {
    throw ValidationError("z magnitude must be finite and non-negative");
  }
  return std::erfc(z_magnitude / std::sqrt(2.0));
}

std::vector<double> default_thresholds() {
  std::vector<double> thresholds;
  for (int i = 1; i <= 9; ++i) thresholds.push_back(i / 10.0);
  return thresholds;
}

ZScoreGrid z_grid(const repeatability::RepeatabilityMatrix& matrix_a,
                  const repeatability::RepeatabilityMatrix& matrix_b,
                  const std::vector<double>& thresholds) {
  if (matrix_a.amounts != matrix_b.amounts) {
    throw ValidationError("matrices disagree on transformation amounts");
  }
  if (thresholds.empty()) throw ValidationError("no thresholds given");
  double prev = 0.0;
  for (double t : thresholds) {
    if (!(t > 0.0) || !(t < 1.0) || t <= prev) {
      throw ValidationError(
          "thresholds must be strictly increasing within (0,1)");
    }
    prev = t;
  }

  // Row lookup by scene id; both matrices keep ids sorted but may have
  // excluded different scenes, so compare over the intersection.
  std::map<std::string, std::size_t> rows_b;
  for (std::size_t i = 0; i < matrix_b.scene_ids.size(); ++i) {
    rows_b.emplace(matrix_b.scene_ids[i], i);
  }
  std::vector<std::pair<std::size_t, std::size_t>> shared;
  for (std::size_t i = 0; i < matrix_a.scene_ids.size(); ++i) {
    const auto it = rows_b.find(matrix_a.scene_ids[i]);
    if (it != rows_b.end()) shared.emplace_back(i, it->second);
  }
  if (shared.empty()) {
    throw ValidationError("empty intersection of scenes between matrices");
  }

  ZScoreGrid grid;
  grid.detector_a = matrix_a.detector_id;
  grid.detector_b = matrix_b.detector_id;
  grid.kind = matrix_a.kind;
  grid.thresholds = thresholds;
  grid.amounts = matrix_a.amounts;
  grid.scene_count = shared.size();

  const std::size_t t = thresholds.size();
  const std::size_t m = grid.amounts.size();
  grid.z.assign(t, std::vector<double>(m, 0.0));
  grid.reliable.assign(t, std::vector<std::uint8_t>(m, 0));
  grid.p.assign(t, std::vector<double>(
                       m, std::numeric_limits<double>::quiet_NaN()));
  grid.counts.assign(t, std::vector<McNemarCounts>(m));

  for (std::size_t ti = 0; ti < t; ++ti) {
    for (std::size_t ai = 0; ai < m; ++ai) {
      McNemarCounts counts;
      for (const auto& [row_a, row_b] : shared) {
        const bool sa = outcome(matrix_a.scores[row_a][ai], thresholds[ti]);
        const bool sb = outcome(matrix_b.scores[row_b][ai], thresholds[ti]);
        if (sa && sb) ++counts.n_ss;
        else if (sa && !sb) ++counts.n_sf;
        else if (!sa && sb) ++counts.n_fs;
        else ++counts.n_ff;
      }
      const McNemarResult r = mcnemar_z(counts);
      grid.counts[ti][ai] = counts;
      grid.z[ti][ai] = r.sign * r.magnitude;
      grid.reliable[ti][ai] = r.reliable ? 1 : 0;
      if (r.reliable) grid.p[ti][ai] = z_to_p(r.magnitude);
    }
  }
  return grid;
}

void write_zgrid_csv(const ZScoreGrid& grid,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "threshold,amount,z,reliable,p,n_sf,n_fs,n_ss,n_ff\n";
  for (std::size_t ti = 0; ti < grid.thresholds.size(); ++ti) {
    for (std::size_t ai = 0; ai < grid.amounts.size(); ++ai) {
      const McNemarCounts& c = grid.counts[ti][ai];
      out << format_double(grid.thresholds[ti]) << ','
          << format_double(grid.amounts[ai]) << ','
          << format_double(grid.z[ti][ai]) << ','
          << (grid.reliable[ti][ai] ? '1' : '0') << ',';
      if (grid.reliable[ti][ai]) out << format_double(grid.p[ti][ai]);
      out << ',' << c.n_sf << ',' << c.n_fs << ',' << c.n_ss << ',' << c.n_ff
          << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace featbench::mcnemar
