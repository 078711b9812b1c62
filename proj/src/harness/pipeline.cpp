#include "featbench/harness/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <set>

#include "featbench/bounds.hpp"
#include "featbench/harness/heatmap.hpp"
#include "featbench/harness/synth.hpp"
#include "featbench/image_io.hpp"
#include "internal/numeric_text.hpp"
#include "internal/parallel.hpp"

namespace featbench::harness {

namespace fs = std::filesystem;

namespace {

using internal::format_double;

struct SceneSource {
  std::string scene_id;
  fs::path file;       // empty for synthetic scenes
  std::uint64_t seed = 0;
};

bool path_safe(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

/// Scene inventory in deterministic order: synthetic ids, or the sorted
/// image files under scenes_root.
std::vector<SceneSource> scene_sources(const RunConfig& config) {
  std::vector<SceneSource> sources;
  if (config.synthetic_scenes > 0) {
    for (int i = 0; i < config.synthetic_scenes; ++i) {
      char id[32];
      std::snprintf(id, sizeof(id), "synth_%03d", i);
      sources.push_back({id, {}, config.seed + static_cast<std::uint64_t>(i)});
    }
    return sources;
  }

  static const std::set<std::string> kExts = {".pgm", ".png", ".jpg", ".jpeg"};
  for (const auto& entry : fs::directory_iterator(config.scenes_root)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (!kExts.count(ext)) continue;
    const std::string id = entry.path().stem().string();
    if (!path_safe(id) || id == "results") {
      throw ValidationError("scene file name must be [A-Za-z0-9_-]+ (and not "
                            "\"results\"): " + entry.path().string());
    }
    sources.push_back({id, entry.path(), 0});
  }
  std::sort(sources.begin(), sources.end(),
            [](const SceneSource& a, const SceneSource& b) {
              return a.scene_id < b.scene_id;
            });
  for (std::size_t i = 0; i + 1 < sources.size(); ++i) {
    if (sources[i].scene_id == sources[i + 1].scene_id) {
      throw ValidationError("duplicate scene id: " + sources[i].scene_id);
    }
  }
  if (sources.empty()) {
    throw ValidationError("no reference images under " + config.scenes_root);
  }
  return sources;
}

imaging::Image load_reference(const RunConfig& config,
                              const SceneSource& source) {
  if (source.file.empty()) {
    return make_synthetic_scene(config.synthetic_size, config.synthetic_size,
                                source.seed);
  }
  return imaging::load_image(source.file);
}

/// Stages after synthesize take their scene list from what synthesize
/// actually produced, so they need no database configuration of their own.
std::vector<std::string> scenes_from_manifest(const RunManifest& manifest) {
  const auto it = manifest.stages.find("synthesize");
  if (it == manifest.stages.end() || it->second.files.empty()) {
    throw ValidationError("no synthesized sequences on record; run synthesize");
  }
  std::set<std::string> ids;
  for (const auto& [rel, sha] : it->second.files) {
    const auto slash = rel.find('/');
    if (slash != std::string::npos) ids.insert(rel.substr(0, slash));
  }
  return {ids.begin(), ids.end()};
}

std::string amount_label(double amount) { return format_double(amount); }

fs::path kind_dir(const fs::path& out, const std::string& scene_id,
                  imaging::TransformKind kind) {
  return out / scene_id / imaging::to_string(kind);
}

std::string stage_input_sig(const std::string& stage,
                            const nlohmann::json& config_slice,
                            const RunManifest& manifest,
                            const std::vector<std::string>& upstream,
                            const std::string& extra = "") {
  return sha256_hex(stage + "\n" + config_slice.dump() + "\n" +
                    manifest.inventory_signature(upstream) + "\n" + extra);
}

/// Collects files produced by one stage, serializing all writes on the
/// caller's thread and hashing the bytes as they go out.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(fs::path root) : root_(std::move(root)) {}

  void write(const std::string& rel, const std::string& bytes) {
    write(rel, reinterpret_cast<const std::uint8_t*>(bytes.data()),
          bytes.size());
  }
  void write(const std::string& rel, const std::vector<std::uint8_t>& bytes) {
    write(rel, bytes.data(), bytes.size());
  }

  /// For files emitted by module writers: hash what landed on disk.
  void adopt(const std::string& rel) {
    inventory_[rel] = sha256_file(root_ / rel);
  }

  const Inventory& inventory() const { return inventory_; }

 private:
  void write(const std::string& rel, const std::uint8_t* data,
             std::size_t size) {
    const fs::path path = root_ / rel;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(size));
    if (!out) throw IoError("write failed: " + path.string());
    inventory_[rel] = sha256_hex(data, size);
  }

  fs::path root_;
  Inventory inventory_;
};

class StageTimer {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

nlohmann::json sequence_manifest_json(const imaging::SceneSequence& seq,
                                      const std::vector<std::string>& image_rel,
                                      const std::vector<std::string>& jpeg_rel) {
  nlohmann::json doc;
  doc["scene_id"] = seq.scene_id;
  doc["transform"] = imaging::to_string(seq.kind);
  doc["width"] = seq.reference().width();
  doc["height"] = seq.reference().height();
  doc["codec"] = seq.kind == imaging::TransformKind::kJpeg
                     ? imaging::jpeg_codec_id()
                     : std::string("none");
  nlohmann::json amounts = nlohmann::json::array();
  nlohmann::json variants = nlohmann::json::array();
  for (std::size_t i = 0; i < seq.variants.size(); ++i) {
    const imaging::SceneVariant& v = seq.variants[i];
    amounts.push_back(v.amount);
    nlohmann::json entry;
    entry["amount"] = v.amount;
    entry["effective_amount"] = v.effective_amount;
    entry["image"] = image_rel[i];
    if (!jpeg_rel[i].empty()) entry["jpeg"] = jpeg_rel[i];
    entry["homography"] = v.homography.entries();
    variants.push_back(std::move(entry));
  }
  doc["amounts"] = std::move(amounts);
  doc["variants"] = std::move(variants);
  return doc;
}

struct SequenceInfo {
  int width = 0;
  int height = 0;
  std::vector<double> amounts;
  std::vector<std::string> image_rel;  // relative to the kind directory
  std::vector<geometry::Homography> homographies;
};

SequenceInfo read_sequence_manifest(const fs::path& kind_path) {
  const fs::path path = kind_path / "sequence.json";
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("missing sequence manifest (run synthesize): " +
                          path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("corrupt sequence manifest " + path.string() + ": " +
                          e.what());
  }
  SequenceInfo info;
  try {
    info.width = doc.at("width").get<int>();
    info.height = doc.at("height").get<int>();
    for (const auto& v : doc.at("variants")) {
      info.amounts.push_back(v.at("amount").get<double>());
      info.image_rel.push_back(v.at("image").get<std::string>());
      const auto h = v.at("homography").get<std::array<double, 9>>();
      info.homographies.push_back(geometry::Homography::from_row_major(h));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed sequence manifest " + path.string() +
                          ": " + e.what());
  }
  return info;
}

nlohmann::json detect_config_slice(const RunConfig& config) {
  const nlohmann::json echo = config_echo(config);
  return {{"builtin", echo["detectors"]["builtin"]},
          {"harris", echo["detectors"]["harris"]},
          {"dog", echo["detectors"]["dog"]}};
}

detectors::KeypointSet run_builtin_detector(const RunConfig& config,
                                            const std::string& id,
                                            const imaging::Image& img) {
  if (id == "harris") return detectors::detect_harris(img, config.harris);
  if (id == "dog") return detectors::detect_dog(img, config.dog);
  throw InternalError("unknown built-in detector id: " + id);
}

std::string excluded_key(const std::string& detector_id,
                         imaging::TransformKind kind) {
  return detector_id + "/" + imaging::to_string(kind);
}

StageReport finish_stage(RunManifest& manifest, const RunConfig& config,
                         const std::string& stage,
                         const std::string& input_sig,
                         Inventory inventory, const StageTimer& timer) {
  manifest.config = config_echo(config);
  manifest.codec = imaging::jpeg_codec_id();
  manifest.stages[stage] = StageRecord{input_sig, std::move(inventory)};
  manifest.timings_ms[stage] = timer.elapsed_ms();
  manifest.save(config.out_dir);

  StageReport report;
  report.stage = stage;
  report.file_count = manifest.stages[stage].files.size();
  report.elapsed_ms = manifest.timings_ms[stage];
  return report;
}

StageReport skipped_stage(RunManifest& manifest, const RunConfig& config,
                          const std::string& stage, const StageTimer& timer) {
  manifest.timings_ms[stage] = timer.elapsed_ms();
  manifest.save(config.out_dir);
  StageReport report;
  report.stage = stage;
  report.skipped = true;
  report.file_count = manifest.stages[stage].files.size();
  report.elapsed_ms = manifest.timings_ms[stage];
  return report;
}

}  // namespace

StageReport cmd_synthesize(const RunConfig& config) {
  config.validate();
  config.validate_database();
  const StageTimer timer;
  fs::create_directories(config.out_dir);
  RunManifest manifest = RunManifest::load(config.out_dir);

  const nlohmann::json echo = config_echo(config);
  const std::string sig = stage_input_sig(
      "synthesize", {{"database", echo["database"]},
                     {"transforms", echo["transforms"]}},
      manifest, {});
  if (manifest.stage_up_to_date("synthesize", sig, config.out_dir)) {
    return skipped_stage(manifest, config, "synthesize", timer);
  }

  const std::vector<SceneSource> sources = scene_sources(config);

  struct SceneArtifacts {
    std::vector<std::pair<std::string, std::vector<std::uint8_t>>> files;
  };

  auto compute = [&](std::size_t i) {
    const SceneSource& source = sources[i];
    const imaging::Image reference = load_reference(config, source);
    SceneArtifacts artifacts;
    for (imaging::TransformKind kind : config.kinds) {
      const imaging::TransformSpec spec = config.spec_for(kind);
      const imaging::SceneSequence seq =
          imaging::synthesize_sequence(reference, spec, source.scene_id);

      const std::string kind_rel =
          source.scene_id + "/" + imaging::to_string(kind);
      std::vector<std::string> image_rel, jpeg_rel;
      for (const imaging::SceneVariant& v : seq.variants) {
        const std::string label = amount_label(v.amount);
        const std::string img_rel = label + "/image.pgm";
        image_rel.push_back(img_rel);
        artifacts.files.emplace_back(kind_rel + "/" + img_rel,
                                     imaging::encode_pgm(v.image));
        if (kind == imaging::TransformKind::kJpeg && v.amount > 0) {
          // Retain the actual codec artifact next to the decoded raster.
          const int quality = 100 - static_cast<int>(v.amount);
          jpeg_rel.push_back(label + "/image.jpg");
          artifacts.files.emplace_back(
              kind_rel + "/" + label + "/image.jpg",
              imaging::jpeg_encode(reference, quality));
        } else {
          jpeg_rel.emplace_back();
        }
      }
      const nlohmann::json seq_doc =
          sequence_manifest_json(seq, image_rel, jpeg_rel);
      const std::string dump = seq_doc.dump(2) + "\n";
      artifacts.files.emplace_back(
          kind_rel + "/sequence.json",
          std::vector<std::uint8_t>(dump.begin(), dump.end()));
    }
    return artifacts;
  };

  ArtifactWriter writer(config.out_dir);
  internal::chunked_parallel<SceneArtifacts>(
      sources.size(), config.jobs, compute,
      [&](std::size_t, SceneArtifacts& artifacts) {
        for (auto& [rel, bytes] : artifacts.files) writer.write(rel, bytes);
      });

  return finish_stage(manifest, config, "synthesize", sig, writer.inventory(),
                      timer);
}

StageReport cmd_detect(const RunConfig& config) {
  config.validate();
  if (config.builtin.empty()) {
    throw ValidationError(
        "no built-in detectors selected; use ingest for external keypoints");
  }
  const StageTimer timer;
  RunManifest manifest = RunManifest::load(config.out_dir);

  const std::string sig = stage_input_sig("detect", detect_config_slice(config),
                                          manifest, {"synthesize"});
  if (manifest.stage_up_to_date("detect", sig, config.out_dir)) {
    return skipped_stage(manifest, config, "detect", timer);
  }

  const std::vector<std::string> scene_ids = scenes_from_manifest(manifest);

  struct SceneKeypoints {
    std::vector<std::pair<std::string, std::string>> files;  // rel, csv bytes
  };

  auto compute = [&](std::size_t i) {
    const std::string& scene_id = scene_ids[i];
    SceneKeypoints result;
    for (imaging::TransformKind kind : config.kinds) {
      const fs::path kind_path = kind_dir(config.out_dir, scene_id, kind);
      const SequenceInfo info = read_sequence_manifest(kind_path);
      const std::string kind_rel = scene_id + "/" + imaging::to_string(kind);
      for (std::size_t v = 0; v < info.image_rel.size(); ++v) {
        const imaging::Image img =
            imaging::load_image(kind_path / info.image_rel[v]);
        for (const std::string& id : config.builtin) {
          detectors::KeypointSet set = run_builtin_detector(config, id, img);
          set.image_ref = scene_id + "/" + std::to_string(v);
          const fs::path image_rel(info.image_rel[v]);
          const std::string rel = kind_rel + "/" +
                                  image_rel.parent_path().generic_string() +
                                  "/kp_" + id + ".csv";
          result.files.emplace_back(rel, detectors::keypoints_to_csv(set));
        }
      }
    }
    return result;
  };

  ArtifactWriter writer(config.out_dir);
  internal::chunked_parallel<SceneKeypoints>(
      scene_ids.size(), config.jobs, compute,
      [&](std::size_t, SceneKeypoints& result) {
        for (auto& [rel, bytes] : result.files) writer.write(rel, bytes);
      });

  return finish_stage(manifest, config, "detect", sig, writer.inventory(),
                      timer);
}

StageReport cmd_ingest(const RunConfig& config) {
  config.validate();
  if (config.external_dir.empty()) {
    throw ValidationError("ingest needs detectors.external_dir");
  }
  const StageTimer timer;
  RunManifest manifest = RunManifest::load(config.out_dir);

  const std::vector<std::string> scene_ids = scenes_from_manifest(manifest);
  const std::string ext_name =
      config.external_format == "oxford" ? "keypoints.oxford" : "keypoints.csv";
  const detectors::KeypointFormat format =
      config.external_format == "oxford" ? detectors::KeypointFormat::kOxford
                                         : detectors::KeypointFormat::kCsv;

  // The externally produced files are stage inputs; hash them into the
  // signature so edits out-of-band trigger recomputation.
  std::string external_blob;
  std::vector<std::vector<fs::path>> per_scene_files(scene_ids.size());
  for (std::size_t i = 0; i < scene_ids.size(); ++i) {
    for (imaging::TransformKind kind : config.kinds) {
      const fs::path kind_path = kind_dir(config.out_dir, scene_ids[i], kind);
      const SequenceInfo info = read_sequence_manifest(kind_path);
      for (const std::string& image_rel : info.image_rel) {
        const fs::path variant_rel =
            fs::path(scene_ids[i]) / imaging::to_string(kind) /
            fs::path(image_rel).parent_path();
        const fs::path ext_file =
            fs::path(config.external_dir) / variant_rel / ext_name;
        if (!fs::is_regular_file(ext_file)) {
          throw ValidationError("missing external keypoint file: " +
                                ext_file.string());
        }
        external_blob += variant_rel.generic_string() + "=" +
                         sha256_file(ext_file) + "\n";
        per_scene_files[i].push_back(ext_file);
      }
    }
  }

  const nlohmann::json slice = {{"external_dir", config.external_dir},
                                {"external_format", config.external_format},
                                {"external_id", config.external_id}};
  const std::string sig = stage_input_sig("ingest", slice, manifest,
                                          {"synthesize"}, external_blob);
  if (manifest.stage_up_to_date("ingest", sig, config.out_dir)) {
    return skipped_stage(manifest, config, "ingest", timer);
  }

  ArtifactWriter writer(config.out_dir);
  for (std::size_t i = 0; i < scene_ids.size(); ++i) {
    std::size_t file_index = 0;
    for (imaging::TransformKind kind : config.kinds) {
      const fs::path kind_path = kind_dir(config.out_dir, scene_ids[i], kind);
      const SequenceInfo info = read_sequence_manifest(kind_path);
      for (std::size_t v = 0; v < info.image_rel.size(); ++v) {
        const fs::path& ext_file = per_scene_files[i][file_index++];
        detectors::KeypointSet set =
            detectors::ingest_keypoints(ext_file, format);
        set.detector_id = config.external_id;
        set.image_ref = scene_ids[i] + "/" + std::to_string(v);
        for (const detectors::Keypoint& kp : set.points) {
          if (kp.x < 0 || kp.x > info.width - 1 || kp.y < 0 ||
              kp.y > info.height - 1) {
            throw ValidationError("keypoint outside image bounds in " +
                                  ext_file.string());
          }
        }
        const std::string rel =
            scene_ids[i] + "/" + imaging::to_string(kind) + "/" +
            fs::path(info.image_rel[v]).parent_path().generic_string() +
            "/kp_" + config.external_id + ".csv";
        writer.write(rel, detectors::keypoints_to_csv(set));
      }
    }
  }

  return finish_stage(manifest, config, "ingest", sig, writer.inventory(),
                      timer);
}

StageReport cmd_evaluate(const RunConfig& config) {
  config.validate();
  const StageTimer timer;
  RunManifest manifest = RunManifest::load(config.out_dir);

  const nlohmann::json echo = config_echo(config);
  const nlohmann::json slice = {{"evaluation", echo["evaluation"]},
                                {"detector_ids", config.detector_ids()}};
  const std::string sig = stage_input_sig(
      "evaluate", slice, manifest, {"synthesize", "detect", "ingest"});
  if (manifest.stage_up_to_date("evaluate", sig, config.out_dir)) {
    return skipped_stage(manifest, config, "evaluate", timer);
  }

  const std::vector<std::string> scene_ids = scenes_from_manifest(manifest);
  ArtifactWriter writer(config.out_dir);

  for (const std::string& detector_id : config.detector_ids()) {
    for (imaging::TransformKind kind : config.kinds) {
      std::vector<repeatability::SceneObservations> scenes;
      std::vector<double> amounts;
      for (const std::string& scene_id : scene_ids) {
        const fs::path kind_path = kind_dir(config.out_dir, scene_id, kind);
        const SequenceInfo info = read_sequence_manifest(kind_path);
        if (amounts.empty()) {
          amounts = info.amounts;
        } else if (amounts != info.amounts) {
          throw ValidationError("mismatched amounts across scenes at " +
                                kind_path.string());
        }
        repeatability::SceneObservations obs;
        obs.scene_id = scene_id;
        for (std::size_t v = 0; v < info.image_rel.size(); ++v) {
          const fs::path kp_path =
              kind_path / fs::path(info.image_rel[v]).parent_path() /
              ("kp_" + detector_id + ".csv");
          if (!fs::is_regular_file(kp_path)) {
            throw ValidationError("missing keypoint set (run detect/ingest): " +
                                  kp_path.string());
          }
          repeatability::VariantObservation variant;
          variant.keypoints = detectors::ingest_keypoints(
              kp_path, detectors::KeypointFormat::kCsv);
          variant.keypoints.detector_id = detector_id;
          variant.homography = info.homographies[v];
          variant.width = info.width;
          variant.height = info.height;
          obs.variants.push_back(std::move(variant));
        }
        scenes.push_back(std::move(obs));
      }

      const repeatability::RepeatabilityMatrix matrix =
          repeatability::build_matrix(scenes, amounts, kind, detector_id,
                                      config.match, config.jobs);

      const std::string base =
          "results/" + detector_id + "/" + imaging::to_string(kind);
      fs::create_directories(fs::path(config.out_dir) / base);
      repeatability::write_matrix_csv(
          matrix, fs::path(config.out_dir) / base / "matrix.csv");
      writer.adopt(base + "/matrix.csv");
      repeatability::write_excluded_json(
          matrix, fs::path(config.out_dir) / base / "excluded.json");
      writer.adopt(base + "/excluded.json");

      if (!matrix.scores.empty()) {
        const bounds::BoundsCurves curves = bounds::compute_bounds(matrix);
        bounds::write_curves_csv(curves,
                                 fs::path(config.out_dir) / base / "curves.csv");
        writer.adopt(base + "/curves.csv");
        const nlohmann::json areas = {
            {"detector", detector_id},
            {"transform", imaging::to_string(kind)},
            {"operating_area", curves.operating_area},
            {"guarantee_area", curves.guarantee_area}};
        writer.write(base + "/areas.json", areas.dump(2) + "\n");
      }

      auto& excluded = manifest.excluded_scenes[excluded_key(detector_id, kind)];
      excluded.clear();
      for (const repeatability::ExcludedScene& e : matrix.excluded) {
        excluded.emplace_back(e.scene_id, e.reason);
      }
    }
  }

  return finish_stage(manifest, config, "evaluate", sig, writer.inventory(),
                      timer);
}

StageReport cmd_compare(const RunConfig& config) {
  config.validate();
  if (config.detector_a == config.detector_b) {
    throw ValidationError("compare needs two distinct detectors");
  }
  const StageTimer timer;
  RunManifest manifest = RunManifest::load(config.out_dir);

  const nlohmann::json echo = config_echo(config);
  const std::string sig = stage_input_sig(
      "compare", {{"comparison", echo["comparison"]}}, manifest, {"evaluate"});
  if (manifest.stage_up_to_date("compare", sig, config.out_dir)) {
    return skipped_stage(manifest, config, "compare", timer);
  }

  ArtifactWriter writer(config.out_dir);
  for (imaging::TransformKind kind : config.kinds) {
    auto matrix_path = [&](const std::string& id) {
      return fs::path(config.out_dir) / "results" / id /
             imaging::to_string(kind) / "matrix.csv";
    };
    if (!fs::is_regular_file(matrix_path(config.detector_a)) ||
        !fs::is_regular_file(matrix_path(config.detector_b))) {
      throw ValidationError("missing repeatability matrix (run evaluate) for " +
                            config.detector_a + " vs " + config.detector_b);
    }
    const auto matrix_a = repeatability::read_matrix_csv(
        matrix_path(config.detector_a), config.detector_a, kind);
    const auto matrix_b = repeatability::read_matrix_csv(
        matrix_path(config.detector_b), config.detector_b, kind);

    const mcnemar::ZScoreGrid grid =
        mcnemar::z_grid(matrix_a, matrix_b, config.thresholds);

    const std::string base = "results/compare_" + config.detector_a + "_vs_" +
                             config.detector_b + "/" + imaging::to_string(kind);
    fs::create_directories(fs::path(config.out_dir) / base);
    mcnemar::write_zgrid_csv(grid,
                             fs::path(config.out_dir) / base / "zgrid.csv");
    writer.adopt(base + "/zgrid.csv");
    emit_heatmap(grid, fs::path(config.out_dir) / base / "heatmap.pgm",
                 fs::path(config.out_dir) / base / "heatmap_legend.json");
    writer.adopt(base + "/heatmap.pgm");
    writer.adopt(base + "/heatmap_legend.json");
  }

  return finish_stage(manifest, config, "compare", sig, writer.inventory(),
                      timer);
}

StageReport cmd_report(const RunConfig& config) {
  config.validate();
  const StageTimer timer;
  RunManifest manifest = RunManifest::load(config.out_dir);

  const std::string sig =
      stage_input_sig("report", nlohmann::json::object(), manifest,
                      {"evaluate", "compare"});
  if (manifest.stage_up_to_date("report", sig, config.out_dir)) {
    return skipped_stage(manifest, config, "report", timer);
  }

  nlohmann::json summary;
  summary["detectors"] = nlohmann::json::object();
  for (const std::string& id : config.detector_ids()) {
    for (imaging::TransformKind kind : config.kinds) {
      const std::string base = "results/" + id + "/" + imaging::to_string(kind);
      const fs::path areas_path = fs::path(config.out_dir) / base / "areas.json";
      if (!fs::is_regular_file(areas_path)) continue;
      std::ifstream in(areas_path);
      nlohmann::json areas;
      in >> areas;
      nlohmann::json entry;
      entry["operating_area"] = areas["operating_area"];
      entry["guarantee_area"] = areas["guarantee_area"];
      entry["matrix"] = base + "/matrix.csv";
      entry["curves"] = base + "/curves.csv";
      const auto it = manifest.excluded_scenes.find(excluded_key(id, kind));
      entry["excluded_scenes"] =
          it == manifest.excluded_scenes.end() ? 0 : it->second.size();
      summary["detectors"][id][imaging::to_string(kind)] = std::move(entry);
    }
  }

  summary["comparisons"] = nlohmann::json::array();
  const std::string pair_dir =
      "compare_" + config.detector_a + "_vs_" + config.detector_b;
  for (imaging::TransformKind kind : config.kinds) {
    const std::string base = "results/" + pair_dir + "/" +
                             imaging::to_string(kind);
    const fs::path legend_path =
        fs::path(config.out_dir) / base / "heatmap_legend.json";
    if (!fs::is_regular_file(legend_path)) continue;
    std::ifstream in(legend_path);
    nlohmann::json legend;
    in >> legend;
    const std::size_t cells = legend["thresholds"].size() *
                              legend["amounts"].size();
    nlohmann::json entry;
    entry["detector_a"] = config.detector_a;
    entry["detector_b"] = config.detector_b;
    entry["transform"] = imaging::to_string(kind);
    entry["zgrid"] = base + "/zgrid.csv";
    entry["heatmap"] = base + "/heatmap.pgm";
    entry["total_cells"] = cells;
    entry["reliable_cells"] = cells - legend["unreliable_cells"].size();
    summary["comparisons"].push_back(std::move(entry));
  }

  ArtifactWriter writer(config.out_dir);
  writer.write("summary.json", summary.dump(2) + "\n");
  return finish_stage(manifest, config, "report", sig, writer.inventory(),
                      timer);
}

std::vector<VerifyIssue> cmd_verify(const RunConfig& config) {
  if (!fs::is_regular_file(fs::path(config.out_dir) / "manifest.json")) {
    throw ValidationError("no manifest under " + config.out_dir);
  }
  const RunManifest manifest = RunManifest::load(config.out_dir);
  return verify_manifest(manifest, config.out_dir);
}

}  // namespace featbench::harness
