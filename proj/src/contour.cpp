#include "wiltscan/contour.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>

#include "wiltscan/error.hpp"

namespace wiltscan {

namespace {

// Clockwise on screen (y down), starting east.
constexpr std::array<Point, 8> kDirections = {{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

int direction_between(const Point& from, const Point& to) {
  const Point d{to.x - from.x, to.y - from.y};
  for (int i = 0; i < 8; ++i) {
    if (kDirections[i] == d) return i;
  }
  return 0;
}

class DisjointSets {
 public:
  std::size_t add() {
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  // The smaller root wins so each set's root is its earliest member.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<Run> extract_runs(const BinaryMask& mask) {
  std::vector<Run> runs;
  const auto bits = mask.bits();
  const int w = mask.width();
  for (int y = 0; y < mask.height(); ++y) {
    const std::uint8_t* row = bits.data() + static_cast<std::size_t>(y) * w;
    int x = 0;
    while (x < w) {
      while (x < w && !row[x]) ++x;
      if (x == w) break;
      const int begin = x;
      while (x < w && row[x]) ++x;
      runs.push_back({y, begin, x});
    }
  }
  return runs;
}

// Outer-border following from the component's first raster pixel, whose west
// neighbor is necessarily background.
std::vector<Point> trace_outer_border(const BinaryMask& mask, const Point& start) {
  auto set = [&](const Point& p) { return mask.contains(p.x, p.y) && mask[static_cast<std::size_t>(p.y) * mask.width() + p.x]; };
  auto step = [](const Point& p, int dir) {
    return Point{p.x + kDirections[dir].x, p.y + kDirections[dir].y};
  };

  std::optional<Point> first;
  for (int i = 0; i < 8; ++i) {
    const Point q = step(start, (4 + i) % 8);
    if (set(q)) {
      first = q;
      break;
    }
  }
  if (!first) return {start};

  std::vector<Point> boundary;
  Point prev = *first;
  Point cur = start;
  while (true) {
    const int back = direction_between(cur, prev);
    Point next = prev;
    for (int i = 1; i <= 8; ++i) {
      const Point q = step(cur, (back - i + 8) % 8);
      if (set(q)) {
        next = q;
        break;
      }
    }
    boundary.push_back(cur);
    if (next == start && cur == *first) break;
    prev = cur;
    cur = next;
  }
  return boundary;
}

}  // namespace

void ContourFilter::validate() const {
  if (min_area < 1) throw Error(ErrorCode::InvalidArgument, "min_area must be at least 1");
  if (max_area && *max_area < min_area) {
    throw Error(ErrorCode::InvalidArgument, "max_area must not be below min_area");
  }
}

std::vector<Contour> find_contours(const BinaryMask& mask) {
  const std::vector<Run> runs = extract_runs(mask);
  DisjointSets sets;
  for (std::size_t i = 0; i < runs.size(); ++i) sets.add();

  // Runs on adjacent rows touch under 8-connectivity when their spans,
  // widened by one pixel, overlap.
  std::size_t prev_begin = 0;
  std::size_t prev_end = 0;
  std::size_t i = 0;
  while (i < runs.size()) {
    const int y = runs[i].y;
    std::size_t row_end = i;
    while (row_end < runs.size() && runs[row_end].y == y) ++row_end;
    const bool adjacent = prev_end > prev_begin && runs[prev_begin].y == y - 1;
    if (adjacent) {
      std::size_t p = prev_begin;
      for (std::size_t r = i; r < row_end; ++r) {
        while (p < prev_end && runs[p].x_end < runs[r].x_begin) ++p;
        for (std::size_t q = p; q < prev_end && runs[q].x_begin <= runs[r].x_end; ++q) {
          sets.unite(r, q);
        }
      }
    }
    prev_begin = i;
    prev_end = row_end;
    i = row_end;
  }

  std::vector<Contour> contours;
  std::vector<std::size_t> slot(runs.size(), SIZE_MAX);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const std::size_t root = sets.find(r);
    if (slot[root] == SIZE_MAX) {
      slot[root] = contours.size();
      Contour c;
      c.bbox = {runs[r].x_begin, runs[r].y, runs[r].x_end - 1, runs[r].y};
      contours.push_back(std::move(c));
    }
    Contour& c = contours[slot[root]];
    c.runs.push_back(runs[r]);
    c.area += static_cast<std::size_t>(runs[r].x_end - runs[r].x_begin);
    c.bbox.min_x = std::min(c.bbox.min_x, runs[r].x_begin);
    c.bbox.max_x = std::max(c.bbox.max_x, runs[r].x_end - 1);
    c.bbox.max_y = runs[r].y;
  }

  for (Contour& c : contours) {
    c.boundary = trace_outer_border(mask, {c.runs.front().x_begin, c.runs.front().y});
  }
  return contours;
}

std::vector<Contour> filter_contours(const std::vector<Contour>& contours,
                                     const ContourFilter& filter) {
  filter.validate();
  std::vector<Contour> out;
  std::copy_if(contours.begin(), contours.end(), std::back_inserter(out),
               [&](const Contour& c) { return filter.accepts(c.area); });
  return out;
}

RasterImage draw_contours(const RasterImage& img, const std::vector<Contour>& contours,
                          const Pixel& color, int thickness) {
  if (img.colorspace() != Colorspace::RGB) {
    throw Error(ErrorCode::InvalidColorspace, "contours are drawn on RGB images");
  }
  if (thickness < 1) throw Error(ErrorCode::InvalidArgument, "thickness must be at least 1");
  for (const Contour& c : contours) {
    for (const Point& p : c.boundary) {
      if (!img.contains(p.x, p.y)) {
        throw Error(ErrorCode::OutOfBounds, "contour point (" + std::to_string(p.x) + ", " +
                                                std::to_string(p.y) + ") lies outside the image");
      }
    }
  }
  RasterImage out = img;
  auto data = out.data();
  const int r = thickness - 1;
  for (const Contour& c : contours) {
    for (const Point& p : c.boundary) {
      const int y0 = std::max(0, p.y - r);
      const int y1 = std::min(img.height() - 1, p.y + r);
      const int x0 = std::max(0, p.x - r);
      const int x1 = std::min(img.width() - 1, p.x + r);
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const std::size_t o = (static_cast<std::size_t>(y) * img.width() + x) * 3;
          data[o] = color[0];
          data[o + 1] = color[1];
          data[o + 2] = color[2];
        }
      }
    }
  }
  return out;
}

BinaryMask contours_to_mask(const std::vector<Contour>& contours, int width, int height) {
  BinaryMask out(width, height);
  auto bits = out.bits();
  for (const Contour& c : contours) {
    for (const Run& run : c.runs) {
      if (run.y < 0 || run.y >= height || run.x_begin < 0 || run.x_end > width) {
        throw Error(ErrorCode::OutOfBounds, "contour run lies outside the mask");
      }
      std::fill(bits.begin() + static_cast<std::ptrdiff_t>(run.y) * width + run.x_begin,
                bits.begin() + static_cast<std::ptrdiff_t>(run.y) * width + run.x_end, 1);
    }
  }
  return out;
}

}  // namespace wiltscan
