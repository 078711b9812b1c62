#include "featbench/repeatability.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>

#include <nlohmann/json.hpp>

#include "internal/numeric_text.hpp"
#include "internal/parallel.hpp"

namespace featbench::repeatability {

namespace {

using internal::format_double;
using internal::parse_double;

struct Candidate {
  double distance;
  int ref_index;
  int target_index;
};

}  // namespace

MatchResult match_keypoints(const detectors::KeypointSet& ref,
                            const detectors::KeypointSet& target,
                            const geometry::Homography& h, int target_width,
                            int target_height, const MatchOptions& options) {
  if (options.epsilon <= 0) throw ValidationError("epsilon must be positive");
  if (options.scale_gate && options.scale_gate_ratio < 1.0) {
    throw ValidationError("scale gate ratio must be at least 1");
  }

  // Project every reference point once; points outside the target's bounds
  // are not part of the common region and do not count toward n_ref.
  std::vector<std::optional<geometry::PlanarPoint>> projected(ref.points.size());
  long n_ref = 0;
  for (std::size_t i = 0; i < ref.points.size(); ++i) {
    const geometry::PlanarPoint p{ref.points[i].x, ref.points[i].y};
    const geometry::PlanarPoint q = geometry::project_point(h, p);
    if (q.x >= 0.0 && q.x <= target_width - 1.0 && q.y >= 0.0 &&
        q.y <= target_height - 1.0) {
      projected[i] = q;
      ++n_ref;
    }
  }
  if (n_ref == 0) {
    throw EmptyReferenceError("empty reference in common region");
  }

  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < ref.points.size(); ++i) {
    if (!projected[i]) continue;
    for (std::size_t j = 0; j < target.points.size(); ++j) {
      const double dx = projected[i]->x - target.points[j].x;
      const double dy = projected[i]->y - target.points[j].y;
      const double dist = std::hypot(dx, dy);
      if (dist > options.epsilon) continue;
      if (options.scale_gate) {
        const double sr = ref.points[i].scale / target.points[j].scale;
        if (sr > options.scale_gate_ratio ||
            sr < 1.0 / options.scale_gate_ratio) {
          continue;
        }
      }
      candidates.push_back(
          {dist, static_cast<int>(i), static_cast<int>(j)});
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              if (a.ref_index != b.ref_index) return a.ref_index < b.ref_index;
              return a.target_index < b.target_index;
            });

  std::vector<bool> ref_taken(ref.points.size(), false);
  std::vector<bool> target_taken(target.points.size(), false);
  MatchResult result;
  result.n_ref = n_ref;
  for (const Candidate& c : candidates) {
    if (ref_taken[c.ref_index] || target_taken[c.target_index]) continue;
    ref_taken[c.ref_index] = true;
    target_taken[c.target_index] = true;
    result.pairs.push_back({c.ref_index, c.target_index, c.distance});
  }
  result.n_rep = static_cast<long>(result.pairs.size());
  result.score = static_cast<double>(result.n_rep) / result.n_ref;
  internal_check(result.n_rep <= result.n_ref,
                 "matched more points than the common region holds");
  return result;
}

double repeatability(const detectors::KeypointSet& ref,
                     const detectors::KeypointSet& target,
                     const geometry::Homography& h, int target_width,
                     int target_height, const MatchOptions& options) {
  return match_keypoints(ref, target, h, target_width, target_height, options)
      .score;
}

RepeatabilityMatrix build_matrix(const std::vector<SceneObservations>& scenes,
                                 const std::vector<double>& amounts,
                                 imaging::TransformKind kind,
                                 const std::string& detector_id,
                                 const MatchOptions& options, int jobs) {
  if (amounts.empty()) throw ValidationError("no transformation amounts");
  for (const SceneObservations& scene : scenes) {
    if (scene.variants.size() != amounts.size()) {
      throw ValidationError("missing keypoint set: scene " + scene.scene_id +
                            " has " + std::to_string(scene.variants.size()) +
                            " variants for " +
                            std::to_string(amounts.size()) + " amounts");
    }
  }

  struct Row {
    std::vector<double> scores;
    std::string failure;  // non-empty when the scene is excluded
  };
  std::vector<Row> rows(scenes.size());

  internal::parallel_for(scenes.size(), jobs, [&](std::size_t i) {
    const SceneObservations& scene = scenes[i];
    const detectors::KeypointSet& ref = scene.variants.front().keypoints;
    Row row;
    row.scores.reserve(amounts.size());
    try {
      for (std::size_t k = 0; k < scene.variants.size(); ++k) {
        const VariantObservation& variant = scene.variants[k];
        row.scores.push_back(repeatability(ref, variant.keypoints,
                                           variant.homography, variant.width,
                                           variant.height, options));
      }
    } catch (const EmptyReferenceError& e) {
      row.failure = e.what();
    }
    rows[i] = std::move(row);
  });

  // Deterministic row order by scene_id regardless of worker scheduling.
  std::vector<std::size_t> order(scenes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scenes[a].scene_id < scenes[b].scene_id;
  });

  RepeatabilityMatrix matrix;
  matrix.detector_id = detector_id;
  matrix.kind = kind;
  matrix.amounts = amounts;
  for (std::size_t i : order) {
    if (!rows[i].failure.empty()) {
      matrix.excluded.push_back({scenes[i].scene_id, rows[i].failure});
      continue;
    }
    internal_check(rows[i].scores.front() == 1.0,
                   "reference scored against itself must be 1.0");
    matrix.scene_ids.push_back(scenes[i].scene_id);
    matrix.scores.push_back(std::move(rows[i].scores));
  }
  return matrix;
}

void write_matrix_csv(const RepeatabilityMatrix& matrix,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "scene_id";
  for (double a : matrix.amounts) out << ',' << format_double(a);
  out << '\n';
  for (std::size_t i = 0; i < matrix.scene_ids.size(); ++i) {
    out << matrix.scene_ids[i];
    for (double s : matrix.scores[i]) out << ',' << format_double(s);
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_excluded_json(const RepeatabilityMatrix& matrix,
                         const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["excluded"] = nlohmann::json::array();
  for (const ExcludedScene& e : matrix.excluded) {
    doc["excluded"].push_back(
        {{"scene_id", e.scene_id}, {"reason", e.reason}});
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

RepeatabilityMatrix read_matrix_csv(const std::filesystem::path& path,
                                    const std::string& detector_id,
                                    imaging::TransformKind kind) {
  std::ifstream in(path);
  if (!in) throw IoError("unreadable matrix file: " + path.string());

  auto split = [](const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = line.find(',', start);
      if (pos == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    return fields;
  };

  RepeatabilityMatrix matrix;
  matrix.detector_id = detector_id;
  matrix.kind = kind;

  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("empty matrix file: " + path.string());
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  if (header.size() < 2 || header[0] != "scene_id") {
    throw ValidationError("malformed matrix header: " + path.string());
  }
  for (std::size_t i = 1; i < header.size(); ++i) {
    matrix.amounts.push_back(parse_double(header[i], path.string()));
  }

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw ValidationError("matrix row width mismatch: " + path.string());
    }
    matrix.scene_ids.push_back(fields[0]);
    std::vector<double> row;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const double v = parse_double(fields[i], path.string());
      if (v < 0.0 || v > 1.0) {
        throw ValidationError("repeatability score outside [0,1]: " +
                              path.string());
      }
      row.push_back(v);
    }
    matrix.scores.push_back(std::move(row));
  }
  return matrix;
}

}  // namespace featbench::repeatability
