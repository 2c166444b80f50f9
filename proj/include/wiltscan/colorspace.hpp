#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wiltscan/image.hpp"

namespace wiltscan {

// h in half-degrees [0,179]; s and v in [0,255].
struct HsvPixel {
  std::uint8_t h = 0;
  std::uint8_t s = 0;
  std::uint8_t v = 0;
  friend bool operator==(const HsvPixel&, const HsvPixel&) = default;
};

// Hexcone max/min conversion with exact integer arithmetic and half-up rounding.
HsvPixel rgb_to_hsv_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

// Pixelwise conversion. Throws InvalidColorspace when the input is already HSV.
RasterImage rgb_to_hsv_image(const RasterImage& img);

using HsvFeature = std::array<float, 3>;

// (h/179, s/255, v/255) per pixel in row-major order.
std::vector<HsvFeature> normalize_hsv(const RasterImage& img);
HsvFeature normalize_hsv_pixel(const Pixel& hsv) noexcept;

}  // namespace wiltscan
