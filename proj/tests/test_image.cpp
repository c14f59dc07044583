#include <doctest.h>

#include <string>
#include <vector>

#include "helpers.hpp"
#include "mosaiclink/errors.hpp"
#include "mosaiclink/image.hpp"

using mosaiclink::GrayImage;
using mosaiclink::decode_pnm;

namespace {

std::vector<unsigned char> bytes(const std::string& s) {
  return std::vector<unsigned char>(s.begin(), s.end());
}

}  // namespace

TEST_CASE("binary PGM (P5) decodes to the raw sample values") {
  std::string data = "P5\n3 2\n255\n";
  data += std::string("\x00\x40\x80\xC0\xFF\x10", 6);
  GrayImage img = decode_pnm(bytes(data));
  CHECK(img.width == 3);
  CHECK(img.height == 2);
  CHECK(img.at(0, 0) == doctest::Approx(0.0));
  CHECK(img.at(0, 1) == doctest::Approx(64.0));
  CHECK(img.at(0, 2) == doctest::Approx(128.0));
  CHECK(img.at(1, 0) == doctest::Approx(192.0));
  CHECK(img.at(1, 1) == doctest::Approx(255.0));
  CHECK(img.at(1, 2) == doctest::Approx(16.0));
}

TEST_CASE("ascii PGM (P2) handles comments and arbitrary whitespace") {
  std::string data =
      "P2 # comment after magic\n"
      "2 2\n"
      "255\n"
      "0 128 # trailing comment\n"
      "255\t64\n";
  GrayImage img = decode_pnm(bytes(data));
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.at(0, 0) == doctest::Approx(0.0));
  CHECK(img.at(0, 1) == doctest::Approx(128.0));
  CHECK(img.at(1, 0) == doctest::Approx(255.0));
  CHECK(img.at(1, 1) == doctest::Approx(64.0));
}

TEST_CASE("color PNM converts with the 0.299/0.587/0.114 luma weights") {
  SUBCASE("binary P6") {
    std::string data = "P6\n2 1\n255\n";
    unsigned char raw[] = {255, 0, 0, 0, 255, 0};  // red, green
    data.append(reinterpret_cast<char*>(raw), sizeof raw);
    GrayImage img = decode_pnm(bytes(data));
    CHECK(img.at(0, 0) == doctest::Approx(0.299 * 255));
    CHECK(img.at(0, 1) == doctest::Approx(0.587 * 255));
  }
  SUBCASE("ascii P3") {
    std::string data = "P3\n1 2\n255\n0 0 255\n10 20 30\n";
    GrayImage img = decode_pnm(bytes(data));
    CHECK(img.at(0, 0) == doctest::Approx(0.114 * 255));
    CHECK(img.at(1, 0) ==
          doctest::Approx(0.299 * 10 + 0.587 * 20 + 0.114 * 30));
  }
}

TEST_CASE("PNM maxval below 255 rescales samples to the [0,255] range") {
  std::string data = "P2\n2 1\n100\n50 100\n";
  GrayImage img = decode_pnm(bytes(data));
  CHECK(img.at(0, 0) == doctest::Approx(127.5));
  CHECK(img.at(0, 1) == doctest::Approx(255.0));
}

TEST_CASE("malformed PNM inputs raise ImageDecodeError") {
  CHECK_THROWS_AS(decode_pnm(bytes("Q5\n1 1\n255\n\x00")),
                  mosaiclink::ImageDecodeError);
  CHECK_THROWS_AS(decode_pnm(bytes("P5\n0 2\n255\n")),
                  mosaiclink::ImageDecodeError);
  CHECK_THROWS_AS(decode_pnm(bytes("P5\n2 2\n65535\n")),
                  mosaiclink::ImageDecodeError);
  // Raster shorter than width * height.
  CHECK_THROWS_AS(decode_pnm(bytes(std::string("P5\n2 2\n255\n") + "\x01\x02")),
                  mosaiclink::ImageDecodeError);
  CHECK_THROWS_AS(decode_pnm(bytes("P2\n2 1\n255\n12\n")),
                  mosaiclink::ImageDecodeError);
  // Ascii sample above maxval.
  CHECK_THROWS_AS(decode_pnm(bytes("P2\n1 1\n100\n101\n")),
                  mosaiclink::ImageDecodeError);
}

TEST_CASE("resample with matching dimensions passes pixels through") {
  GrayImage img = testutil::make_gray(3, 2, {1, 2, 3, 4, 5, 6});
  GrayImage out = mosaiclink::resample_area(img, 3, 2);
  CHECK(out.pixels == img.pixels);
}

TEST_CASE("integer downsample produces exact block means") {
  // 4x4 image of distinct values; 2x2 output = means of the four quadrants.
  std::vector<double> px;
  for (int i = 0; i < 16; ++i) px.push_back(i);
  GrayImage img = testutil::make_gray(4, 4, px);
  GrayImage out = mosaiclink::resample_area(img, 2, 2);
  REQUIRE(out.width == 2);
  REQUIRE(out.height == 2);
  CHECK(out.at(0, 0) == doctest::Approx((0 + 1 + 4 + 5) / 4.0));
  CHECK(out.at(0, 1) == doctest::Approx((2 + 3 + 6 + 7) / 4.0));
  CHECK(out.at(1, 0) == doctest::Approx((8 + 9 + 12 + 13) / 4.0));
  CHECK(out.at(1, 1) == doctest::Approx((10 + 11 + 14 + 15) / 4.0));
}

TEST_CASE("fractional downsample weights partially covered pixels") {
  // 3 source pixels -> 2 outputs; each output covers 1.5 source pixels.
  GrayImage img = testutil::make_gray(3, 1, {10, 40, 100});
  GrayImage out = mosaiclink::resample_area(img, 2, 1);
  CHECK(out.at(0, 0) == doctest::Approx((10 + 0.5 * 40) / 1.5));
  CHECK(out.at(0, 1) == doctest::Approx((0.5 * 40 + 100) / 1.5));
}

TEST_CASE("resampling preserves the overall mean intensity") {
  GrayImage img = testutil::make_gray(5, 4, std::vector<double>(20, 0));
  for (int i = 0; i < 20; ++i) img.pixels[i] = (i * 37) % 251;
  double in_mean = 0;
  for (double v : img.pixels) in_mean += v;
  in_mean /= img.pixels.size();
  GrayImage out = mosaiclink::resample_area(img, 3, 2);
  double out_mean = 0;
  for (double v : out.pixels) out_mean += v;
  out_mean /= out.pixels.size();
  CHECK(out_mean == doctest::Approx(in_mean));
}

TEST_CASE("load_gray_image reads PNM from disk and rejects missing files") {
  testutil::ScratchDir dir;
  auto path = dir.file("tiny.pgm");
  testutil::write_file(path, "P2\n1 1\n255\n42\n");
  GrayImage img = mosaiclink::load_gray_image(path);
  CHECK(img.width == 1);
  CHECK(img.at(0, 0) == doctest::Approx(42.0));
  CHECK_THROWS_AS(mosaiclink::load_gray_image(dir.file("absent.pgm")),
                  mosaiclink::ImageDecodeError);
}

TEST_CASE("non-PNM formats decode only when extended support is built in") {
  // Minimal 2x2 8-bit grayscale PNG with samples 0, 100, 200, 255.
  static const unsigned char png[] = {
      137, 80, 78, 71, 13, 10, 26, 10, 0, 0, 0, 13, 73, 72, 68, 82, 0, 0,
      0,   2,  0,  0,  0,  2,  8,  0,  0, 0, 0, 87, 221, 82, 248, 0, 0, 0,
      14,  73, 68, 65, 84, 120, 156, 99, 96, 72, 97, 56, 241, 31, 0, 4, 37,
      2,   44, 198, 15, 186, 33, 0, 0, 0, 0, 73, 69, 78, 68, 174, 66, 96, 130};
  testutil::ScratchDir dir;
  auto path = dir.file("tiny.png");
  testutil::write_file(
      path, std::string(reinterpret_cast<const char*>(png), sizeof png));
  if (mosaiclink::supports_extended_formats()) {
    GrayImage img = mosaiclink::load_gray_image(path);
    REQUIRE(img.width == 2);
    REQUIRE(img.height == 2);
    // Gray PNG: R == G == B, so luma equals the sample value.
    CHECK(img.at(0, 0) == doctest::Approx(0.0));
    CHECK(img.at(0, 1) == doctest::Approx(100.0));
    CHECK(img.at(1, 0) == doctest::Approx(200.0));
    CHECK(img.at(1, 1) == doctest::Approx(255.0));
  } else {
    CHECK_THROWS_AS(mosaiclink::load_gray_image(path),
                    mosaiclink::ImageDecodeError);
  }
}
