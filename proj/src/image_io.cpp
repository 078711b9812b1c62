#include "featbench/image_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <jpeglib.h>
#include <png.h>

namespace featbench::imaging {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("unreadable file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

// PGM header tokens are separated by whitespace; '#' starts a comment that
// runs to end of line.
class PgmHeaderReader {
 public:
  explicit PgmHeaderReader(const std::vector<std::uint8_t>& bytes)
      : bytes_(bytes) {}

  std::string next_token() {
    skip_separators();
    std::string tok;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) {
      tok.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (tok.empty()) throw ValidationError("truncated PGM header");
    return tok;
  }

  // Position of the first raster byte: exactly one whitespace char follows
  // the maxval token.
  std::size_t raster_offset() const { return pos_ + 1; }

 private:
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

int parse_header_int(const std::string& tok, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(std::string("bad PGM ") + what + ": " + tok);
  }
}

Image decode_pgm(const std::vector<std::uint8_t>& bytes,
                 const std::string& origin) {
  PgmHeaderReader header(bytes);
  if (header.next_token() != "P5") {
    throw ValidationError("unsupported PGM variant (only binary P5): " + origin);
  }
  const int width = parse_header_int(header.next_token(), "width");
  const int height = parse_header_int(header.next_token(), "height");
  const int maxval = parse_header_int(header.next_token(), "maxval");
  if (width < 1 || height < 1) {
    throw ValidationError("zero-dimension image: " + origin);
  }
  if (maxval < 1 || maxval > 255) {
    throw ValidationError("unsupported PGM maxval (need 1..255): " + origin);
  }
  const std::size_t offset = header.raster_offset();
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (offset + count > bytes.size()) {
    throw ValidationError("truncated PGM raster: " + origin);
  }
  std::vector<std::uint8_t> pixels(bytes.begin() + offset,
                                   bytes.begin() + offset + count);
  return Image(width, height, std::move(pixels));
}

struct PngReadState {
  const std::vector<std::uint8_t>* bytes;
  std::size_t pos;
};

void png_read_cb(png_structp png, png_bytep out, png_size_t len) {
  auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (state->pos + len > state->bytes->size()) {
    png_error(png, "truncated PNG stream");
  }
  std::memcpy(out, state->bytes->data() + state->pos, len);
  state->pos += len;
}

Image decode_png(const std::vector<std::uint8_t>& bytes,
                 const std::string& origin) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }

  std::vector<std::uint8_t> interleaved;
  int width = 0, height = 0, channels = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ValidationError("corrupt PNG: " + origin);
  }

  PngReadState state{&bytes, 0};
  png_set_read_fn(png, &state, png_read_cb);
  png_read_info(png, info);

  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);

  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  channels = png_get_channels(png, info);
  if (width < 1 || height < 1) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ValidationError("zero-dimension image: " + origin);
  }

  const std::size_t row_bytes = png_get_rowbytes(png, info);
  interleaved.resize(row_bytes * height);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = interleaved.data() + row_bytes * y;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height);
  if (channels == 1) {
    for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = interleaved[i];
  } else if (channels == 3) {
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      pixels[i] = bt601_luma(interleaved[3 * i], interleaved[3 * i + 1],
                             interleaved[3 * i + 2]);
    }
  } else {
    throw ValidationError("unsupported PNG channel layout: " + origin);
  }
  return Image(width, height, std::move(pixels));
}

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  std::jmp_buf jmp;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jmp, 1);
}

}  // namespace

std::uint8_t bt601_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return round_to_u8(0.299 * r + 0.587 * g + 0.114 * b);
}

std::vector<std::uint8_t> encode_pgm(const Image& img) {
  if (img.empty()) throw ValidationError("cannot encode empty image");
  std::string header = "P5\n" + std::to_string(img.width()) + " " +
                       std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

void save_pgm(const Image& img, const std::filesystem::path& path) {
  const auto bytes = encode_pgm(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

Image load_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
    return decode_pgm(bytes, path.string());
  }
  static const std::uint8_t kPngMagic[4] = {0x89, 'P', 'N', 'G'};
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kPngMagic, 4) == 0) {
    return decode_png(bytes, path.string());
  }
  if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8) {
    return jpeg_decode(bytes);
  }
  throw ValidationError("unsupported format (need PGM/PNG/JPEG): " +
                        path.string());
}

std::vector<std::uint8_t> jpeg_encode(const Image& img, int quality) {
  if (img.empty()) throw ValidationError("cannot encode empty image");
  if (quality < 1 || quality > 100) {
    throw ValidationError("jpeg quality out of range: " +
                          std::to_string(quality));
  }

  jpeg_compress_struct cinfo;
  JpegErrorMgr err;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;

  unsigned char* buffer = nullptr;
  unsigned long buffer_size = 0;

  if (setjmp(err.jmp)) {
    jpeg_destroy_compress(&cinfo);
    if (buffer) std::free(buffer);
    throw IoError(std::string("jpeg encode failed: ") + err.message);
  }

  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buffer, &buffer_size);

  cinfo.image_width = static_cast<JDIMENSION>(img.width());
  cinfo.image_height = static_cast<JDIMENSION>(img.height());
  cinfo.input_components = 1;
  cinfo.in_color_space = JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE /* force baseline */);
  jpeg_start_compress(&cinfo, TRUE);

  const std::uint8_t* raster = img.pixels().data();
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(
        raster + static_cast<std::size_t>(cinfo.next_scanline) * img.width());
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);

  std::vector<std::uint8_t> out(buffer, buffer + buffer_size);
  std::free(buffer);
  return out;
}

Image jpeg_decode(const std::vector<std::uint8_t>& bytes) {
  jpeg_decompress_struct cinfo;
  JpegErrorMgr err;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;

  if (setjmp(err.jmp)) {
    jpeg_destroy_decompress(&cinfo);
    throw ValidationError(std::string("jpeg decode failed: ") + err.message);
  }

  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  // Grayscale output; for YCbCr sources this takes the Y (BT.601 luma) plane.
  cinfo.out_color_space = JCS_GRAYSCALE;
  jpeg_start_decompress(&cinfo);

  const int width = static_cast<int>(cinfo.output_width);
  const int height = static_cast<int>(cinfo.output_height);
  if (width < 1 || height < 1) {
    jpeg_destroy_decompress(&cinfo);
    throw ValidationError("zero-dimension image in jpeg stream");
  }

  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row =
        pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * width;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return Image(width, height, std::move(pixels));
}

std::string jpeg_codec_id() {
  std::ostringstream id;
#if defined(LIBJPEG_TURBO_VERSION)
#define FB_STR2(x) #x
#define FB_STR(x) FB_STR2(x)
  id << "libjpeg-turbo " << FB_STR(LIBJPEG_TURBO_VERSION);
#undef FB_STR
#undef FB_STR2
#elif defined(JCS_EXTENSIONS)
  id << "libjpeg-turbo";
#else
  id << "libjpeg";
#endif
  id << " (API " << JPEG_LIB_VERSION << ")";
  return id.str();
}

}  // namespace featbench::imaging
