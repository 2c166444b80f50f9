#include "wiltscan/serial.hpp"

#include "wiltscan/colorspace.hpp"
#include "wiltscan/error.hpp"

namespace wiltscan::serial {

RasterImage rgb_to_hsv_image(const RasterImage& img) {
  if (img.colorspace() != Colorspace::RGB) {
    throw Error(ErrorCode::InvalidColorspace, "rgb_to_hsv_image expects an RGB image");
  }
  RasterImage out(img.width(), img.height(), Colorspace::HSV);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const Pixel p = img.at(x, y);
      const HsvPixel hsv = rgb_to_hsv_pixel(p[0], p[1], p[2]);
      out.set(x, y, {hsv.h, hsv.s, hsv.v});
    }
  }
  return out;
}

BinaryMask threshold_mask(const RasterImage& hsv, const HsvRange& range) {
  if (hsv.colorspace() != Colorspace::HSV) {
    throw Error(ErrorCode::InvalidColorspace, "threshold_mask expects an HSV image");
  }
  BinaryMask out(hsv.width(), hsv.height());
  for (int y = 0; y < hsv.height(); ++y) {
    for (int x = 0; x < hsv.width(); ++x) out.set(x, y, range.contains(hsv.at(x, y)));
  }
  return out;
}

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) {
  const auto offsets = se.offsets();
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      bool keep = true;
      for (const Point& b : offsets) {
        const int nx = x + b.x;
        const int ny = y + b.y;
        if (mask.contains(nx, ny) && !mask.at(nx, ny)) {
          keep = false;
          break;
        }
      }
      out.set(x, y, keep);
    }
  }
  return out;
}

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) {
  const auto offsets = se.offsets();
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      bool hit = false;
      for (const Point& b : offsets) {
        const int nx = x - b.x;
        const int ny = y - b.y;
        if (mask.contains(nx, ny) && mask.at(nx, ny)) {
          hit = true;
          break;
        }
      }
      out.set(x, y, hit);
    }
  }
  return out;
}

AssignmentStats assign_labels(std::span<const PixelSample> samples,
                              std::span<const Centroid> centroids, std::span<int> labels) {
  AssignmentStats stats;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    int best = 0;
    double best_d = squared_distance(samples[i].features, centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
      const double d = squared_distance(samples[i].features, centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    if (labels[i] != best) {
      labels[i] = best;
      ++stats.changed;
    }
    stats.inertia += best_d;
  }
  return stats;
}

}  // namespace wiltscan::serial
