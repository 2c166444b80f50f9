#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wiltscan/image.hpp"

namespace wiltscan {

struct BoundingBox {
  int min_x = 0;
  int min_y = 0;
  int max_x = 0;
  int max_y = 0;  // inclusive

  bool contains(const Point& p) const noexcept {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  bool intersects(const BoundingBox& o) const noexcept {
    return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
  }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// Horizontal span [x_begin, x_end) on row y.
struct Run {
  int y = 0;
  int x_begin = 0;
  int x_end = 0;
  friend bool operator==(const Run&, const Run&) = default;
};

// One 8-connected component: its traced outer border, pixel-count area and
// the component's pixels as row runs in raster order.
struct Contour {
  std::vector<Point> boundary;
  std::size_t area = 0;
  BoundingBox bbox;
  std::vector<Run> runs;
};

struct ContourFilter {
  std::size_t min_area = 10'000;
  std::optional<std::size_t> max_area;

  void validate() const;
  bool accepts(std::size_t area) const noexcept {
    return area >= min_area && (!max_area || area <= *max_area);
  }
  friend bool operator==(const ContourFilter&, const ContourFilter&) = default;
};

// Components ordered by their first pixel in raster order.
std::vector<Contour> find_contours(const BinaryMask& mask);

std::vector<Contour> filter_contours(const std::vector<Contour>& contours,
                                     const ContourFilter& filter);

// Sets every pixel within Chebyshev distance thickness - 1 of a boundary point
// to color. Throws OutOfBounds for boundary points outside the image.
RasterImage draw_contours(const RasterImage& img, const std::vector<Contour>& contours,
                          const Pixel& color, int thickness);

// Union of the contours' component pixels.
BinaryMask contours_to_mask(const std::vector<Contour>& contours, int width, int height);

}  // namespace wiltscan
