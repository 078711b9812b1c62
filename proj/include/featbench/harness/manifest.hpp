#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "featbench/errors.hpp"

namespace featbench::harness {

std::string sha256_hex(const std::uint8_t* data, std::size_t size);
std::string sha256_hex(const std::string& text);
std::string sha256_file(const std::filesystem::path& path);

/// Relative path -> sha256 of the files one stage produced.
using Inventory = std::map<std::string, std::string>;

struct StageRecord {
  std::string input_sig;  // hash of the stage's config slice and upstream inventories
  Inventory files;
};

/// The run's ground truth: config echo, codec identifier, per-stage file
/// inventories with checksums, and excluded scenes. Timing is recorded per
/// stage too, but serialized to a sidecar (timings.json) so the manifest
/// proper stays byte-identical across reruns.
struct RunManifest {
  nlohmann::json config;
  std::string codec;
  std::map<std::string, StageRecord> stages;
  // detector/transform -> excluded scene ids with reasons
  std::map<std::string, std::vector<std::pair<std::string, std::string>>>
      excluded_scenes;
  std::map<std::string, double> timings_ms;  // sidecar only

  static RunManifest load(const std::filesystem::path& out_dir);
  void save(const std::filesystem::path& out_dir) const;

  /// True when the recorded stage matches input_sig and every inventoried
  /// file still exists with its recorded checksum — the stage can be skipped.
  bool stage_up_to_date(const std::string& stage,
                        const std::string& input_sig,
                        const std::filesystem::path& out_dir) const;

  /// Hash of all inventories a downstream stage consumes, in stage order.
  std::string inventory_signature(const std::vector<std::string>& stage_names) const;
};

struct VerifyIssue {
  enum Kind { kMissing, kChecksumMismatch, kUnlisted } kind;
  std::string path;
};

/// Walks the output directory against the manifest: every inventoried file
/// must exist with a matching checksum and nothing unlisted may be present
/// (the manifest and timing sidecar themselves are exempt).
std::vector<VerifyIssue> verify_manifest(const RunManifest& manifest,
                                         const std::filesystem::path& out_dir);

}  // namespace featbench::harness
