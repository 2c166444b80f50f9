#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "test_helpers.hpp"
#include "wiltscan/colorspace.hpp"
#include "wiltscan/error.hpp"
#include "wiltscan/serial.hpp"

using namespace wiltscan;

TEST_CASE("hexcone oracle agrees with hand-computed sextant cases") {
  // (255,128,0): hue 60*128/255 = 30.118 deg -> 15.06 -> 15.
  CHECK(oracle::hexcone(255, 128, 0) == HsvPixel{15, 255, 255});
  // (0,0,255): 240 deg -> 120.
  CHECK(oracle::hexcone(0, 0, 255) == HsvPixel{120, 255, 255});
  // (255,0,255): 300 deg -> 150.
  CHECK(oracle::hexcone(255, 0, 255) == HsvPixel{150, 255, 255});
  // (100,50,50): R max, g-b = 0 -> hue 0; s = 255*50/100 = 127.5 -> 128.
  CHECK(oracle::hexcone(100, 50, 50) == HsvPixel{0, 128, 100});
  // (50,50,100): 240 deg; s 128.
  CHECK(oracle::hexcone(50, 50, 100) == HsvPixel{120, 128, 100});
  // (255,0,1): -0.235 deg wraps to 359.76 -> 179.88 -> 180 -> 0.
  CHECK(oracle::hexcone(255, 0, 1) == HsvPixel{0, 255, 255});
}

TEST_CASE("rgb_to_hsv_pixel reference values") {
  CHECK(rgb_to_hsv_pixel(255, 0, 0) == HsvPixel{0, 255, 255});
  CHECK(rgb_to_hsv_pixel(0, 255, 0) == HsvPixel{60, 255, 255});
  CHECK(rgb_to_hsv_pixel(128, 128, 128) == HsvPixel{0, 0, 128});
  CHECK(rgb_to_hsv_pixel(0, 0, 0) == HsvPixel{0, 0, 0});
  CHECK(rgb_to_hsv_pixel(255, 255, 0) == HsvPixel{30, 255, 255});
  CHECK(rgb_to_hsv_pixel(0, 255, 255) == HsvPixel{90, 255, 255});
  CHECK(rgb_to_hsv_pixel(0, 0, 255) == HsvPixel{120, 255, 255});
  CHECK(rgb_to_hsv_pixel(255, 0, 255) == HsvPixel{150, 255, 255});
}

TEST_CASE("rgb_to_hsv_pixel matches the oracle on every RGB triple") {
  std::size_t mismatches = 0;
  std::size_t range_violations = 0;
  for (int r = 0; r < 256; ++r) {
    for (int g = 0; g < 256; ++g) {
      for (int b = 0; b < 256; ++b) {
        const HsvPixel p = rgb_to_hsv_pixel(static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                            static_cast<std::uint8_t>(b));
        if (p.h > 179 || (p.v == 0 && p.s != 0)) ++range_violations;
        if (!(p == oracle::hexcone(r, g, b))) ++mismatches;
      }
    }
  }
  CHECK(range_violations == 0);
  CHECK(mismatches == 0);
}

TEST_CASE("achromatic inputs keep their value and have zero saturation") {
  for (int v = 0; v < 256; ++v) {
    const auto c = static_cast<std::uint8_t>(v);
    const HsvPixel p = rgb_to_hsv_pixel(c, c, c);
    CHECK(p.v == v);
    CHECK(p.s == 0);
    CHECK(p.h == 0);
  }
}

TEST_CASE("rgb_to_hsv_image") {
  SUBCASE("single red pixel") {
    const RasterImage img(1, 1, Colorspace::RGB, {255, 0, 0});
    const RasterImage hsv = rgb_to_hsv_image(img);
    CHECK(hsv.colorspace() == Colorspace::HSV);
    CHECK(hsv.at(0, 0) == Pixel{0, 255, 255});
  }
  SUBCASE("uniform input stays uniform") {
    std::vector<std::uint8_t> data;
    for (int i = 0; i < 12; ++i) data.insert(data.end(), {40, 200, 90});
    const RasterImage hsv = rgb_to_hsv_image(RasterImage(4, 3, Colorspace::RGB, data));
    for (int y = 0; y < 3; ++y) {
      for (int x = 0; x < 4; ++x) CHECK(hsv.at(x, y) == hsv.at(0, 0));
    }
  }
  SUBCASE("HSV input is rejected") {
    const RasterImage hsv(1, 1, Colorspace::HSV);
    CHECK_THROWS_AS(rgb_to_hsv_image(hsv), Error);
  }
  SUBCASE("parallel kernel equals serial reference and commutes with permutation") {
    std::mt19937_64 rng(21);
    const RasterImage img = testing::random_rgb(rng, 97, 61);
    const RasterImage par = rgb_to_hsv_image(img);
    CHECK(par == serial::rgb_to_hsv_image(img));

    // Reverse pixel order: conversion of the reversed image is the reversed conversion.
    std::vector<std::uint8_t> rev(img.data().size());
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < 3; ++c) rev[3 * (n - 1 - i) + c] = img.data()[3 * i + c];
    }
    const RasterImage rev_hsv = rgb_to_hsv_image(RasterImage(97, 61, Colorspace::RGB, rev));
    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < 3; ++c) CHECK(rev_hsv.data()[3 * (n - 1 - i) + c] == par.data()[3 * i + c]);
    }
  }
}

TEST_CASE("normalize_hsv") {
  const RasterImage hsv(3, 1, Colorspace::HSV, {0, 0, 0, 179, 255, 255, 60, 255, 255});
  const auto f = normalize_hsv(hsv);
  REQUIRE(f.size() == 3);
  CHECK(f[0] == HsvFeature{0.0F, 0.0F, 0.0F});
  CHECK(f[1] == HsvFeature{1.0F, 1.0F, 1.0F});
  CHECK(f[2][0] == doctest::Approx(0.3352).epsilon(1e-4));
  CHECK(f[2][1] == 1.0F);
  CHECK(f[2][2] == 1.0F);
  CHECK_THROWS_AS(normalize_hsv(RasterImage(1, 1, Colorspace::RGB)), Error);

  // Distinct lattice values stay distinct per channel.
  for (int a = 0; a < 179; ++a) {
    CHECK(normalize_hsv_pixel({static_cast<std::uint8_t>(a), 0, 0})[0] <
          normalize_hsv_pixel({static_cast<std::uint8_t>(a + 1), 0, 0})[0]);
  }
  for (int a = 0; a < 255; ++a) {
    const auto lo = normalize_hsv_pixel({0, static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(a)});
    const auto hi = normalize_hsv_pixel({0, static_cast<std::uint8_t>(a + 1), static_cast<std::uint8_t>(a + 1)});
    CHECK(lo[1] < hi[1]);
    CHECK(lo[2] < hi[2]);
  }
}
