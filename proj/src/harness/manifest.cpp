#include "featbench/harness/manifest.hpp"

#include <fstream>

#include <openssl/evp.h>

namespace featbench::harness {

namespace {

constexpr const char* kManifestName = "manifest.json";
constexpr const char* kTimingsName = "timings.json";

std::string to_hex(const unsigned char* digest, unsigned len) {
  static const char* kHex = "0123456789abcdef";
  std::string hex(2 * len, '0');
  for (unsigned i = 0; i < len; ++i) {
    hex[2 * i] = kHex[digest[i] >> 4];
    hex[2 * i + 1] = kHex[digest[i] & 0xF];
  }
  return hex;
}

}  // namespace

std::string sha256_hex(const std::uint8_t* data, std::size_t size) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned digest_len = 0;
  if (EVP_Digest(data, size, digest, &digest_len, EVP_sha256(), nullptr) != 1) {
    throw InternalError("sha256 digest failed");
  }
  return to_hex(digest, digest_len);
}

std::string sha256_hex(const std::string& text) {
  return sha256_hex(reinterpret_cast<const std::uint8_t*>(text.data()),
                    text.size());
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("unreadable file for hashing: " + path.string());

  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw InternalError("EVP_MD_CTX_new failed");
  if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw InternalError("sha256 init failed");
  }
  char buffer[1 << 16];
  while (in) {
    in.read(buffer, sizeof(buffer));
    const std::streamsize got = in.gcount();
    if (got > 0 &&
        EVP_DigestUpdate(ctx, buffer, static_cast<std::size_t>(got)) != 1) {
      EVP_MD_CTX_free(ctx);
      throw InternalError("sha256 update failed");
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned digest_len = 0;
  const int ok = EVP_DigestFinal_ex(ctx, digest, &digest_len);
  EVP_MD_CTX_free(ctx);
  if (ok != 1) throw InternalError("sha256 final failed");
  return to_hex(digest, digest_len);
}

RunManifest RunManifest::load(const std::filesystem::path& out_dir) {
  RunManifest manifest;
  const auto path = out_dir / kManifestName;
  if (!std::filesystem::exists(path)) return manifest;

  std::ifstream in(path);
  if (!in) throw IoError("unreadable manifest: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("corrupt manifest " + path.string() + ": " +
                          e.what());
  }

  manifest.config = doc.value("config", nlohmann::json::object());
  manifest.codec = doc.value("codec", "");
  if (doc.contains("stages")) {
    for (const auto& [name, entry] : doc["stages"].items()) {
      StageRecord record;
      record.input_sig = entry.value("input_sig", "");
      if (entry.contains("files")) {
        for (const auto& [file, sha] : entry["files"].items()) {
          record.files[file] = sha.get<std::string>();
        }
      }
      manifest.stages[name] = std::move(record);
    }
  }
  if (doc.contains("excluded_scenes")) {
    for (const auto& [key, list] : doc["excluded_scenes"].items()) {
      auto& entries = manifest.excluded_scenes[key];
      for (const auto& item : list) {
        entries.emplace_back(item.value("scene_id", ""),
                             item.value("reason", ""));
      }
    }
  }
  return manifest;
}

void RunManifest::save(const std::filesystem::path& out_dir) const {
  nlohmann::json doc;
  doc["config"] = config;
  doc["codec"] = codec;
  doc["stages"] = nlohmann::json::object();
  for (const auto& [name, record] : stages) {
    nlohmann::json entry;
    entry["input_sig"] = record.input_sig;
    entry["files"] = nlohmann::json::object();
    for (const auto& [file, sha] : record.files) entry["files"][file] = sha;
    doc["stages"][name] = std::move(entry);
  }
  doc["excluded_scenes"] = nlohmann::json::object();
  for (const auto& [key, list] : excluded_scenes) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [scene, reason] : list) {
      entries.push_back({{"scene_id", scene}, {"reason", reason}});
    }
    doc["excluded_scenes"][key] = std::move(entries);
  }

  {
    std::ofstream out(out_dir / kManifestName,
                      std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write manifest in " + out_dir.string());
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("manifest write failed");
  }

  // Wall-clock timings are observational, never part of the determinism
  // contract, so they live next to the manifest rather than inside it.
  nlohmann::json timing_doc;
  for (const auto& [stage, ms] : timings_ms) timing_doc[stage] = ms;
  std::ofstream out(out_dir / kTimingsName, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write timings in " + out_dir.string());
  out << timing_doc.dump(2) << '\n';
}

bool RunManifest::stage_up_to_date(const std::string& stage,
                                   const std::string& input_sig,
                                   const std::filesystem::path& out_dir) const {
  const auto it = stages.find(stage);
  if (it == stages.end()) return false;
  if (it->second.input_sig != input_sig) return false;
  for (const auto& [file, sha] : it->second.files) {
    const auto path = out_dir / file;
    if (!std::filesystem::is_regular_file(path)) return false;
    if (sha256_file(path) != sha) return false;
  }
  return true;
}

std::string RunManifest::inventory_signature(
    const std::vector<std::string>& stage_names) const {
  std::string blob;
  for (const std::string& name : stage_names) {
    const auto it = stages.find(name);
    if (it == stages.end()) continue;
    blob += name;
    blob += '\n';
    for (const auto& [file, sha] : it->second.files) {
      blob += file;
      blob += '=';
      blob += sha;
      blob += '\n';
    }
  }
  return sha256_hex(blob);
}

std::vector<VerifyIssue> verify_manifest(const RunManifest& manifest,
                                         const std::filesystem::path& out_dir) {
  std::vector<VerifyIssue> issues;

  std::map<std::string, std::string> all_files;
  for (const auto& [name, record] : manifest.stages) {
    for (const auto& [file, sha] : record.files) all_files[file] = sha;
  }

  for (const auto& [file, sha] : all_files) {
    const auto path = out_dir / file;
    if (!std::filesystem::is_regular_file(path)) {
      issues.push_back({VerifyIssue::kMissing, file});
    } else if (sha256_file(path) != sha) {
      issues.push_back({VerifyIssue::kChecksumMismatch, file});
    }
  }

  if (std::filesystem::is_directory(out_dir)) {
    for (const auto& entry :
         std::filesystem::recursive_directory_iterator(out_dir)) {
      if (!entry.is_regular_file()) continue;
      const std::string rel =
          std::filesystem::relative(entry.path(), out_dir).generic_string();
      if (rel == kManifestName || rel == kTimingsName) continue;
      if (!all_files.count(rel)) {
        issues.push_back({VerifyIssue::kUnlisted, rel});
      }
    }
  }
  return issues;
}

}  // namespace featbench::harness
