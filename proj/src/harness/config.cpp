#include "featbench/harness/config.hpp"

#include <algorithm>
#include <set>

#include "featbench/harness/toml.hpp"

namespace featbench::harness {

namespace {

bool path_safe_token(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

const TomlValue* find(const TomlDocument& doc, const std::string& section,
                      const std::string& key) {
  const auto sec = doc.find(section);
  if (sec == doc.end()) return nullptr;
  const auto val = sec->second.find(key);
  if (val == sec->second.end()) return nullptr;
  return &val->second;
}

void read_string(const TomlDocument& doc, const std::string& section,
                 const std::string& key, std::string& out) {
  if (const TomlValue* v = find(doc, section, key)) out = v->as_string(key);
}

void read_int(const TomlDocument& doc, const std::string& section,
              const std::string& key, int& out) {
  if (const TomlValue* v = find(doc, section, key)) {
    out = static_cast<int>(v->as_int(key));
  }
}

void read_double(const TomlDocument& doc, const std::string& section,
                 const std::string& key, double& out) {
  if (const TomlValue* v = find(doc, section, key)) out = v->as_double(key);
}

void read_bool(const TomlDocument& doc, const std::string& section,
               const std::string& key, bool& out) {
  if (const TomlValue* v = find(doc, section, key)) out = v->as_bool(key);
}

void read_double_array(const TomlDocument& doc, const std::string& section,
                       const std::string& key, std::vector<double>& out) {
  if (const TomlValue* v = find(doc, section, key)) {
    out = v->as_double_array(key);
  }
}

void read_string_array(const TomlDocument& doc, const std::string& section,
                       const std::string& key, std::vector<std::string>& out) {
  if (const TomlValue* v = find(doc, section, key)) {
    out = v->as_string_array(key);
  }
}

const std::set<std::string> kKnownSections = {
    "", "database", "transforms", "detectors", "evaluation",
    "comparison", "output"};

}  // namespace

imaging::TransformSpec RunConfig::spec_for(imaging::TransformKind kind) const {
  imaging::TransformSpec spec;
  spec.kind = kind;
  switch (kind) {
    case imaging::TransformKind::kJpeg:
      spec.amounts = jpeg_amounts;
      break;
    case imaging::TransformKind::kBlur:
      spec.amounts = blur_amounts;
      spec.blur_cumulative = blur_cumulative;
      break;
    case imaging::TransformKind::kBrightness:
      spec.amounts = brightness_amounts;
      break;
  }
  return spec;
}

std::vector<std::string> RunConfig::detector_ids() const {
  std::vector<std::string> ids = builtin;
  if (!external_dir.empty()) ids.push_back(external_id);
  return ids;
}

void RunConfig::validate_database() const {
  if (scenes_root.empty() && synthetic_scenes <= 0) {
    throw ValidationError(
        "configure either database.scenes_root or database.synthetic_scenes");
  }
  if (!scenes_root.empty() && synthetic_scenes > 0) {
    throw ValidationError(
        "scenes_root and synthetic_scenes are mutually exclusive");
  }
  if (!scenes_root.empty() && !std::filesystem::is_directory(scenes_root)) {
    throw ValidationError("scenes root is not a directory: " + scenes_root);
  }
  if (synthetic_scenes > 0 && synthetic_size < 32) {
    throw ValidationError("synthetic scenes need size of at least 32");
  }
}

void RunConfig::validate() const {
  if (kinds.empty()) throw ValidationError("no transform kinds selected");
  for (imaging::TransformKind kind : kinds) {
    spec_for(kind).validate();
  }
  for (const std::string& id : builtin) {
    if (id != "harris" && id != "dog") {
      throw ValidationError("unknown built-in detector: " + id);
    }
  }
  if (!external_dir.empty()) {
    if (!std::filesystem::is_directory(external_dir)) {
      throw ValidationError("external keypoint directory missing: " +
                            external_dir);
    }
    if (external_format != "oxford" && external_format != "csv") {
      throw ValidationError("external format must be oxford or csv");
    }
    if (!path_safe_token(external_id)) {
      throw ValidationError("external detector id must be [A-Za-z0-9_-]+");
    }
  }
  if (match.epsilon <= 0) throw ValidationError("epsilon must be positive");
  if (thresholds.empty()) throw ValidationError("no comparison thresholds");
  double prev = 0.0;
  for (double t : thresholds) {
    if (!(t > 0.0) || !(t < 1.0) || t <= prev) {
      throw ValidationError(
          "thresholds must be strictly increasing within (0,1)");
    }
    prev = t;
  }
  if (out_dir.empty()) throw ValidationError("output directory not set");
}

RunConfig load_config(const std::filesystem::path& path) {
  const TomlDocument doc = load_toml(path);
  for (const auto& [section, table] : doc) {
    if (!kKnownSections.count(section)) {
      throw ValidationError("unknown config section [" + section + "] in " +
                            path.string());
    }
    (void)table;
  }

  RunConfig config;
  read_string(doc, "database", "scenes_root", config.scenes_root);
  read_int(doc, "database", "synthetic_scenes", config.synthetic_scenes);
  read_int(doc, "database", "synthetic_size", config.synthetic_size);
  if (const TomlValue* v = find(doc, "database", "seed")) {
    config.seed = static_cast<std::uint64_t>(v->as_int("seed"));
  }

  std::vector<std::string> kind_names;
  read_string_array(doc, "transforms", "kinds", kind_names);
  if (!kind_names.empty()) {
    config.kinds.clear();
    for (const std::string& name : kind_names) {
      config.kinds.push_back(imaging::transform_kind_from_string(name));
    }
  }
  read_double_array(doc, "transforms", "jpeg_amounts", config.jpeg_amounts);
  read_double_array(doc, "transforms", "blur_amounts", config.blur_amounts);
  read_double_array(doc, "transforms", "brightness_amounts",
                    config.brightness_amounts);
  read_bool(doc, "transforms", "blur_cumulative", config.blur_cumulative);

  read_string_array(doc, "detectors", "builtin", config.builtin);
  read_double(doc, "detectors", "harris_sigma_d", config.harris.sigma_d);
  read_double(doc, "detectors", "harris_sigma_i", config.harris.sigma_i);
  read_double(doc, "detectors", "harris_k", config.harris.k);
  read_double(doc, "detectors", "harris_threshold_ratio",
              config.harris.threshold_ratio);
  read_int(doc, "detectors", "harris_nms_radius", config.harris.nms_radius);
  read_int(doc, "detectors", "dog_octaves", config.dog.octaves);
  read_int(doc, "detectors", "dog_scales_per_octave",
           config.dog.scales_per_octave);
  read_double(doc, "detectors", "dog_contrast_threshold",
              config.dog.contrast_threshold);
  read_double(doc, "detectors", "dog_edge_ratio", config.dog.edge_ratio);
  read_string(doc, "detectors", "external_dir", config.external_dir);
  read_string(doc, "detectors", "external_format", config.external_format);
  read_string(doc, "detectors", "external_id", config.external_id);

  read_double(doc, "evaluation", "epsilon", config.match.epsilon);
  read_bool(doc, "evaluation", "scale_gate", config.match.scale_gate);
  read_double(doc, "evaluation", "scale_gate_ratio",
              config.match.scale_gate_ratio);

  read_double_array(doc, "comparison", "thresholds", config.thresholds);
  read_string(doc, "comparison", "detector_a", config.detector_a);
  read_string(doc, "comparison", "detector_b", config.detector_b);

  read_string(doc, "output", "directory", config.out_dir);
  read_int(doc, "output", "jobs", config.jobs);
  return config;
}

nlohmann::json config_echo(const RunConfig& config) {
  nlohmann::json echo;
  echo["database"] = {{"scenes_root", config.scenes_root},
                      {"synthetic_scenes", config.synthetic_scenes},
                      {"synthetic_size", config.synthetic_size},
                      {"seed", config.seed}};
  nlohmann::json kinds = nlohmann::json::array();
  for (imaging::TransformKind kind : config.kinds) {
    kinds.push_back(imaging::to_string(kind));
  }
  echo["transforms"] = {{"kinds", kinds},
                        {"jpeg_amounts", config.jpeg_amounts},
                        {"blur_amounts", config.blur_amounts},
                        {"brightness_amounts", config.brightness_amounts},
                        {"blur_cumulative", config.blur_cumulative}};
  echo["detectors"] = {{"builtin", config.builtin},
                       {"harris",
                        {{"sigma_d", config.harris.sigma_d},
                         {"sigma_i", config.harris.sigma_i},
                         {"k", config.harris.k},
                         {"threshold_ratio", config.harris.threshold_ratio},
                         {"nms_radius", config.harris.nms_radius}}},
                       {"dog",
                        {{"octaves", config.dog.octaves},
                         {"scales_per_octave", config.dog.scales_per_octave},
                         {"contrast_threshold", config.dog.contrast_threshold},
                         {"edge_ratio", config.dog.edge_ratio}}},
                       {"external_dir", config.external_dir},
                       {"external_format", config.external_format},
                       {"external_id", config.external_id}};
  echo["evaluation"] = {{"epsilon", config.match.epsilon},
                        {"scale_gate", config.match.scale_gate},
                        {"scale_gate_ratio", config.match.scale_gate_ratio}};
  echo["comparison"] = {{"thresholds", config.thresholds},
                        {"detector_a", config.detector_a},
                        {"detector_b", config.detector_b}};
  return echo;
}

}  // namespace featbench::harness
