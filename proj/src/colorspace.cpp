#include "wiltscan/colorspace.hpp"

#include <algorithm>
#include <cstddef>

#include "wiltscan/error.hpp"

namespace wiltscan {

namespace {

// Rounds num/den half-up for den > 0 and any sign of num.
int round_half_up(int num, int den) noexcept {
  const int twice = 2 * num + den;
  const int q = twice / (2 * den);
  return (twice % (2 * den) != 0 && twice < 0) ? q - 1 : q;
}

}  // namespace

HsvPixel rgb_to_hsv_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  const int hi = std::max({r, g, b});
  const int lo = std::min({r, g, b});
  const int delta = hi - lo;

  HsvPixel out;
  out.v = static_cast<std::uint8_t>(hi);
  if (hi == 0) return out;
  out.s = static_cast<std::uint8_t>(round_half_up(255 * delta, hi));
  if (delta == 0) return out;

  // Half-degree hue: each 60-degree sextant spans 30 units.
  int h = 0;
  if (hi == r) {
    h = round_half_up(180 * delta + 30 * (g - b), delta);
  } else if (hi == g) {
    h = round_half_up(60 * delta + 30 * (b - r), delta);
  } else {
    h = round_half_up(120 * delta + 30 * (r - g), delta);
  }
  if (h >= 180) h -= 180;
  out.h = static_cast<std::uint8_t>(h);
  return out;
}

RasterImage rgb_to_hsv_image(const RasterImage& img) {
  if (img.colorspace() != Colorspace::RGB) {
    throw Error(ErrorCode::InvalidColorspace, "rgb_to_hsv_image expects an RGB image");
  }
  RasterImage out(img.width(), img.height(), Colorspace::HSV);
  const std::uint8_t* src = img.data().data();
  std::uint8_t* dst = out.data().data();
  const auto n = static_cast<std::ptrdiff_t>(img.pixel_count());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const HsvPixel p = rgb_to_hsv_pixel(src[3 * i], src[3 * i + 1], src[3 * i + 2]);
    dst[3 * i] = p.h;
    dst[3 * i + 1] = p.s;
    dst[3 * i + 2] = p.v;
  }
  return out;
}

HsvFeature normalize_hsv_pixel(const Pixel& hsv) noexcept {
  return {static_cast<float>(hsv[0]) / 179.0F, static_cast<float>(hsv[1]) / 255.0F,
          static_cast<float>(hsv[2]) / 255.0F};
}

std::vector<HsvFeature> normalize_hsv(const RasterImage& img) {
  if (img.colorspace() != Colorspace::HSV) {
    throw Error(ErrorCode::InvalidColorspace, "normalize_hsv expects an HSV image");
  }
  const auto data = img.data();
  std::vector<HsvFeature> out(img.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = normalize_hsv_pixel({data[3 * i], data[3 * i + 1], data[3 * i + 2]});
  }
  return out;
}

}  // namespace wiltscan
