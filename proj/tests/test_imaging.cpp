#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include <png.h>

#include "featbench/image_io.hpp"
#include "featbench/transforms.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace featbench;
using namespace featbench::imaging;
using fbtest::TempDir;

namespace {

void write_bytes(const std::filesystem::path& path,
                 const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

// Test-only PNG writer so the loader's gray and RGB paths get real inputs.
void write_png(const std::filesystem::path& path, int w, int h, int channels,
               const std::vector<std::uint8_t>& interleaved) {
  std::FILE* fp = std::fopen(path.string().c_str(), "wb");
  REQUIRE(fp != nullptr);
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  REQUIRE(setjmp(png_jmpbuf(png)) == 0);
  png_init_io(png, fp);
  png_set_IHDR(png, info, w, h, 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < h; ++y) {
    png_write_row(png, const_cast<png_bytep>(
                           interleaved.data() +
                           static_cast<std::size_t>(y) * w * channels));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

TEST_CASE("image invariants") {
  CHECK_THROWS_AS(Image(0, 4), ValidationError);
  CHECK_THROWS_AS(Image(4, 0), ValidationError);
  CHECK_THROWS_AS(Image(2, 2, std::vector<std::uint8_t>{1, 2, 3}),
                  ValidationError);
  const Image img(3, 2, 7);
  CHECK(img.size() == 6);
  CHECK(img(2, 1) == 7);
}

TEST_CASE("rounding is half away from zero with clamping") {
  CHECK(round_to_u8(25.5) == 26);
  CHECK(round_to_u8(24.5) == 25);
  CHECK(round_to_u8(-3.0) == 0);
  CHECK(round_to_u8(400.0) == 255);
  CHECK(round_to_u8(0.49) == 0);
}

TEST_CASE("pgm round trip and header parsing") {
  TempDir tmp("pgm");

  const std::string header = "P5\n# comment line\n2 2\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  const std::vector<std::uint8_t> raster = {0, 255, 128, 64};
  bytes.insert(bytes.end(), raster.begin(), raster.end());
  write_bytes(tmp.path() / "a.pgm", bytes);

  const Image img = load_image(tmp.path() / "a.pgm");
  CHECK(img.width() == 2);
  CHECK(img.height() == 2);
  CHECK(img.pixels() == raster);

  save_pgm(img, tmp.path() / "b.pgm");
  CHECK(load_image(tmp.path() / "b.pgm") == img);
}

TEST_CASE("pgm error paths") {
  TempDir tmp("pgmerr");
  CHECK_THROWS_AS(load_image(tmp.path() / "missing.pgm"), IoError);

  const std::string zero = "P5\n0 0\n255\n";
  write_bytes(tmp.path() / "zero.pgm",
              std::vector<std::uint8_t>(zero.begin(), zero.end()));
  CHECK_THROWS_WITH_AS(load_image(tmp.path() / "zero.pgm"),
                       doctest::Contains("zero-dimension"), ValidationError);

  const std::string ascii = "P2\n2 2\n255\n0 0 0 0\n";
  write_bytes(tmp.path() / "ascii.pgm",
              std::vector<std::uint8_t>(ascii.begin(), ascii.end()));
  CHECK_THROWS_AS(load_image(tmp.path() / "ascii.pgm"), ValidationError);

  const std::string junk = "not an image";
  write_bytes(tmp.path() / "junk.bin",
              std::vector<std::uint8_t>(junk.begin(), junk.end()));
  CHECK_THROWS_WITH_AS(load_image(tmp.path() / "junk.bin"),
                       doctest::Contains("unsupported format"),
                       ValidationError);

  const std::string truncated = "P5\n4 4\n255\nab";
  write_bytes(tmp.path() / "short.pgm",
              std::vector<std::uint8_t>(truncated.begin(), truncated.end()));
  CHECK_THROWS_AS(load_image(tmp.path() / "short.pgm"), ValidationError);
}

TEST_CASE("bt601 luma") {
  CHECK(bt601_luma(255, 0, 0) == 76);  // round(0.299 * 255)
  CHECK(bt601_luma(0, 255, 0) == 150);
  CHECK(bt601_luma(0, 0, 255) == 29);
  CHECK(bt601_luma(255, 255, 255) == 255);
}

TEST_CASE("png loading: gray passthrough and rgb to luma") {
  TempDir tmp("png");

  const std::vector<std::uint8_t> gray = {10, 200, 55, 254};
  write_png(tmp.path() / "gray.png", 2, 2, 1, gray);
  const Image g = load_image(tmp.path() / "gray.png");
  CHECK(g.width() == 2);
  CHECK(g.pixels() == gray);

  // One red, one green, one blue, one white pixel.
  const std::vector<std::uint8_t> rgb = {255, 0,   0,  0,   255, 0,
                                         0,   0, 255, 255, 255, 255};
  write_png(tmp.path() / "rgb.png", 2, 2, 3, rgb);
  const Image c = load_image(tmp.path() / "rgb.png");
  CHECK(c(0, 0) == 76);
  CHECK(c(1, 0) == 150);
  CHECK(c(0, 1) == 29);
  CHECK(c(1, 1) == 255);
}

TEST_CASE("jpeg codec round trip in memory") {
  const Image img = fbtest::noise_image(48, 32, 11);
  const auto bytes = jpeg_encode(img, 90);
  const Image back = jpeg_decode(bytes);
  CHECK(back.width() == img.width());
  CHECK(back.height() == img.height());
  CHECK_FALSE(jpeg_codec_id().empty());

  // Determinism of the pinned codec build.
  CHECK(jpeg_encode(img, 90) == bytes);
}

TEST_CASE("jpeg file loads through the generic loader") {
  TempDir tmp("jpegload");
  const Image img = fbtest::noise_image(32, 32, 3);
  write_bytes(tmp.path() / "img.jpg", jpeg_encode(img, 95));
  const Image back = load_image(tmp.path() / "img.jpg");
  CHECK(back.width() == 32);
  CHECK(back.height() == 32);
}

TEST_CASE("jpeg_transform identity and quality ordering") {
  const Image img = fbtest::noise_image(64, 64, 5);
  CHECK(jpeg_transform(img, 0) == img);  // no codec pass at ratio 0

  // Heavier compression must hurt fidelity: PSNR at ratio 95 below ratio 20.
  const double psnr_heavy = fbtest::psnr(img, jpeg_transform(img, 95));
  const double psnr_light = fbtest::psnr(img, jpeg_transform(img, 20));
  CHECK(psnr_heavy < psnr_light);

  CHECK_THROWS_WITH_AS(jpeg_transform(img, 99),
                       doctest::Contains("ratio out of range"),
                       ValidationError);
  CHECK_THROWS_AS(jpeg_transform(img, -1), ValidationError);
  CHECK_THROWS_AS(jpeg_transform(img, 50.5), ValidationError);
}

TEST_CASE("blur_transform identity, impulse oracle, and range checks") {
  const Image img = fbtest::noise_image(40, 40, 9);
  CHECK(blur_transform(img, 0) == img);
  CHECK_THROWS_AS(blur_transform(img, -0.1), ValidationError);
  CHECK_THROWS_AS(blur_transform(img, 8.5), ValidationError);

  // 33x33 impulse, sigma 1: center equals round(255 * k(0,0)) with k the
  // normalized discrete kernel; every pixel must match a direct 2-D
  // convolution oracle.
  const Image impulse = fbtest::impulse_image(33);
  const Image blurred = blur_transform(impulse, 1.0);
  CHECK(blurred(16, 16) == 41);  // 255 * 0.159156 rounds to 41

  const auto field = fbtest::oracle::gaussian_2d(
      fbtest::oracle::to_field(impulse), 33, 33, 1.0);
  for (int y = 0; y < 33; ++y) {
    for (int x = 0; x < 33; ++x) {
      CHECK(blurred(x, y) ==
            round_to_u8(field[static_cast<std::size_t>(y) * 33 + x]));
    }
  }
}

TEST_CASE("blur matches the 2-D oracle on textured input") {
  const Image img = fbtest::noise_image(24, 17, 21);
  const Image blurred = blur_transform(img, 1.7);
  const auto field = fbtest::oracle::gaussian_2d(fbtest::oracle::to_field(img),
                                                 24, 17, 1.7);
  int max_diff = 0;
  for (int y = 0; y < 17; ++y) {
    for (int x = 0; x < 24; ++x) {
      const int diff = std::abs(
          static_cast<int>(blurred(x, y)) -
          static_cast<int>(
              round_to_u8(field[static_cast<std::size_t>(y) * 24 + x])));
      max_diff = std::max(max_diff, diff);
    }
  }
  // Separable vs direct differ only by floating-point association, which can
  // flip a value sitting exactly on a rounding boundary.
  CHECK(max_diff <= 1);
}

TEST_CASE("gaussian semigroup property on a smooth image") {
  const Image smooth = fbtest::gradient_image(128);
  const Image twice = blur_transform(blur_transform(smooth, 1.0), 1.0);
  const Image once = blur_transform(smooth, std::sqrt(2.0));
  int max_diff = 0;
  for (std::size_t i = 0; i < twice.pixels().size(); ++i) {
    max_diff = std::max(max_diff, std::abs(static_cast<int>(twice.pixels()[i]) -
                                           static_cast<int>(once.pixels()[i])));
  }
  CHECK(max_diff <= 2);
}

TEST_CASE("blur preserves interior mean") {
  const Image img = fbtest::noise_image(96, 96, 31);
  const Image blurred = blur_transform(img, 2.0);
  const int margin = static_cast<int>(std::ceil(4.0 * 2.0));
  double mean_in = 0.0, mean_out = 0.0;
  int count = 0;
  for (int y = margin; y < 96 - margin; ++y) {
    for (int x = margin; x < 96 - margin; ++x) {
      mean_in += img(x, y);
      mean_out += blurred(x, y);
      ++count;
    }
  }
  CHECK(std::abs(mean_in - mean_out) / count <= 1.0);
}

TEST_CASE("brightness_transform formula and monotonicity") {
  const Image img = fbtest::noise_image(32, 32, 13);
  CHECK(brightness_transform(img, 0) == img);

  Image two(2, 1, std::vector<std::uint8_t>{200, 255});
  const Image at20 = brightness_transform(two, 20);
  CHECK(at20(0, 0) == 160);  // 0.8 * 200
  const Image at90 = brightness_transform(two, 90);
  CHECK(at90(1, 0) == 26);  // round(25.5) half away from zero

  CHECK_THROWS_AS(brightness_transform(img, -1), ValidationError);
  CHECK_THROWS_AS(brightness_transform(img, 99.5), ValidationError);

  // Pointwise monotone in the decrease amount.
  const Image d1 = brightness_transform(img, 15);
  const Image d2 = brightness_transform(img, 60);
  for (std::size_t i = 0; i < img.pixels().size(); ++i) {
    CHECK(d2.pixels()[i] <= d1.pixels()[i]);
  }
}

TEST_CASE("transform spec validation") {
  TransformSpec spec;
  spec.kind = TransformKind::kBlur;
  spec.amounts = {0, 0.5, 1.0};
  CHECK_NOTHROW(spec.validate());

  spec.amounts = {0.5, 1.0};
  CHECK_THROWS_WITH_AS(spec.validate(), doctest::Contains("must be 0"),
                       ValidationError);
  spec.amounts = {0, 1.0, 1.0};
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.amounts = {0, 9.0};
  CHECK_THROWS_AS(spec.validate(), ValidationError);

  TransformSpec jpeg = TransformSpec::with_default_amounts(TransformKind::kJpeg);
  CHECK(jpeg.amounts.size() == 14);
  CHECK_NOTHROW(jpeg.validate());
  jpeg.amounts.push_back(99);
  CHECK_THROWS_AS(jpeg.validate(), ValidationError);

  CHECK(default_amounts(TransformKind::kBlur).size() == 10);
  CHECK(default_amounts(TransformKind::kBrightness).size() == 14);
}

TEST_CASE("synthesize_sequence shapes, identity homographies, determinism") {
  const Image reference = fbtest::noise_image(48, 48, 17);

  const auto blur_seq = synthesize_sequence(
      reference, TransformSpec::with_default_amounts(TransformKind::kBlur),
      "s1");
  CHECK(blur_seq.variants.size() == 10);
  CHECK(blur_seq.variants.front().image == reference);
  CHECK(blur_seq.reference() == reference);

  const auto jpeg_seq = synthesize_sequence(
      reference, TransformSpec::with_default_amounts(TransformKind::kJpeg),
      "s1");
  CHECK(jpeg_seq.variants.size() == 14);

  const auto light_seq = synthesize_sequence(
      reference,
      TransformSpec::with_default_amounts(TransformKind::kBrightness), "s1");
  CHECK(light_seq.variants.size() == 14);
  for (const SceneVariant& v : light_seq.variants) {
    CHECK(v.homography.is_identity());
  }

  // Byte-identical on rerun.
  const auto again = synthesize_sequence(
      reference, TransformSpec::with_default_amounts(TransformKind::kJpeg),
      "s1");
  for (std::size_t i = 0; i < again.variants.size(); ++i) {
    CHECK(again.variants[i].image == jpeg_seq.variants[i].image);
  }
}

TEST_CASE("cumulative blur accumulates sigma as root sum of squares") {
  TransformSpec spec;
  spec.kind = TransformKind::kBlur;
  spec.amounts = {0, 1.0, 1.0001};  // strictly increasing
  spec.blur_cumulative = true;

  const Image smooth = fbtest::gradient_image(64);
  const auto chain = synthesize_sequence(smooth, spec, "g");
  CHECK(chain.variants[1].effective_amount == doctest::Approx(1.0));
  CHECK(chain.variants[2].effective_amount ==
        doctest::Approx(std::sqrt(1.0 + 1.0001 * 1.0001)));

  // Chained blur approximates one blur at the accumulated sigma.
  const Image direct = blur_transform(smooth, std::sqrt(2.0));
  int max_diff = 0;
  for (std::size_t i = 0; i < direct.pixels().size(); ++i) {
    max_diff = std::max(
        max_diff,
        std::abs(static_cast<int>(chain.variants[2].image.pixels()[i]) -
                 static_cast<int>(direct.pixels()[i])));
  }
  CHECK(max_diff <= 2);
}
