#include "featbench/bounds.hpp"

#include <algorithm>
#include <fstream>

#include "internal/numeric_text.hpp"

namespace featbench::bounds {

namespace {

using internal::format_double;
using internal::parse_double;
using repeatability::RepeatabilityMatrix;

void require_nonempty(const RepeatabilityMatrix& m) {
  if (m.scores.empty() || m.amounts.empty()) {
    throw ValidationError("cannot compute curves of an empty matrix");
  }
}

std::vector<double> column(const RepeatabilityMatrix& m, std::size_t k) {
  std::vector<double> values;
  values.reserve(m.scores.size());
  for (const auto& row : m.scores) values.push_back(row[k]);
  return values;
}

double trapezoid(const std::vector<double>& u, const std::vector<double>& v) {
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    area += (u[i + 1] - u[i]) * 0.5 * (v[i] + v[i + 1]);
  }
  return area;
}

}  // namespace

std::vector<double> max_curve(const RepeatabilityMatrix& m) {
  require_nonempty(m);
  std::vector<double> curve;
  curve.reserve(m.amounts.size());
  for (std::size_t k = 0; k < m.amounts.size(); ++k) {
    const auto col = column(m, k);
    curve.push_back(*std::max_element(col.begin(), col.end()));
  }
  return curve;
}

std::vector<double> min_curve(const RepeatabilityMatrix& m) {
  require_nonempty(m);
  std::vector<double> curve;
  curve.reserve(m.amounts.size());
  for (std::size_t k = 0; k < m.amounts.size(); ++k) {
    const auto col = column(m, k);
    curve.push_back(*std::min_element(col.begin(), col.end()));
  }
  return curve;
}

std::vector<double> median_curve(const RepeatabilityMatrix& m) {
  require_nonempty(m);
  std::vector<double> curve;
  curve.reserve(m.amounts.size());
  for (std::size_t k = 0; k < m.amounts.size(); ++k) {
    auto col = column(m, k);
    std::sort(col.begin(), col.end());
    const std::size_t n = col.size();
    curve.push_back(n % 2 == 1 ? col[n / 2]
                               : 0.5 * (col[n / 2 - 1] + col[n / 2]));
  }
  return curve;
}

std::pair<double, double> region_areas(const BoundsCurves& curves) {
  const std::size_t m = curves.amounts.size();
  if (m < 2) {
    throw ValidationError("region areas need at least two amounts");
  }
  const double lo = curves.amounts.front();
  const double hi = curves.amounts.back();
  std::vector<double> unit(m);
  for (std::size_t i = 0; i < m; ++i) {
    unit[i] = (curves.amounts[i] - lo) / (hi - lo);
  }

  const double guarantee = trapezoid(unit, curves.min_curve);
  std::vector<double> band(m);
  for (std::size_t i = 0; i < m; ++i) {
    band[i] = curves.max_curve[i] - curves.min_curve[i];
  }
  const double operating = trapezoid(unit, band);
  return {operating, guarantee};
}

BoundsCurves compute_bounds(const RepeatabilityMatrix& m) {
  BoundsCurves curves;
  curves.amounts = m.amounts;
  curves.max_curve = max_curve(m);
  curves.min_curve = min_curve(m);
  curves.median_curve = median_curve(m);
  if (curves.amounts.size() >= 2) {
    const auto [operating, guarantee] = region_areas(curves);
    curves.operating_area = operating;
    curves.guarantee_area = guarantee;
  }
  return curves;
}

void write_curves_csv(const BoundsCurves& curves,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "amount,max,median,min\n";
  for (std::size_t i = 0; i < curves.amounts.size(); ++i) {
    out << format_double(curves.amounts[i]) << ','
        << format_double(curves.max_curve[i]) << ','
        << format_double(curves.median_curve[i]) << ','
        << format_double(curves.min_curve[i]) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

BoundsCurves read_curves_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("unreadable curves file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("empty curves file: " + path.string());
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "amount,max,median,min") {
    throw ValidationError("malformed curves header: " + path.string());
  }
  BoundsCurves curves;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<double, 4> vals{};
    std::size_t start = 0;
    for (int f = 0; f < 4; ++f) {
      const std::size_t pos = f < 3 ? line.find(',', start) : line.size();
      if (pos == std::string::npos) {
        throw ValidationError("malformed curves row: " + path.string());
      }
      vals[f] = parse_double(
          std::string_view(line).substr(start, pos - start), path.string());
      start = pos + 1;
    }
    curves.amounts.push_back(vals[0]);
    curves.max_curve.push_back(vals[1]);
    curves.median_curve.push_back(vals[2]);
    curves.min_curve.push_back(vals[3]);
  }
  if (curves.amounts.size() >= 2) {
    const auto [operating, guarantee] = region_areas(curves);
    curves.operating_area = operating;
    curves.guarantee_area = guarantee;
  }
  return curves;
}

}  // namespace featbench::bounds
