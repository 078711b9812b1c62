#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "featbench/image.hpp"

namespace featbench::imaging {

/// Loads a grayscale image from a PGM (P5), PNG, or JPEG file. The format is
/// detected from the file's magic bytes, not its extension. Color sources are
/// converted to ITU-R BT.601 luma, rounded half away from zero.
Image load_image(const std::filesystem::path& path);

/// Writes a binary PGM (P5, maxval 255) file.
void save_pgm(const Image& img, const std::filesystem::path& path);

/// Encodes to PGM bytes without touching the filesystem.
std::vector<std::uint8_t> encode_pgm(const Image& img);

// In-memory baseline JPEG codec, quality 1..100. Grayscale both ways.
std::vector<std::uint8_t> jpeg_encode(const Image& img, int quality);
Image jpeg_decode(const std::vector<std::uint8_t>& bytes);

/// Identifier and version of the linked JPEG codec, recorded in manifests so
/// runs can pin the codec build they were produced with.
std::string jpeg_codec_id();

/// BT.601 luma for one RGB triple, rounded half away from zero.
std::uint8_t bt601_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b);

}  // namespace featbench::imaging
