#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <random>

#include "oracles.hpp"
#include "test_helpers.hpp"
#include "wiltscan/contour.hpp"
#include "wiltscan/error.hpp"

using namespace wiltscan;

namespace {

std::vector<std::size_t> run_pixels(const Contour& c, int width) {
  std::vector<std::size_t> out;
  for (const Run& r : c.runs) {
    for (int x = r.x_begin; x < r.x_end; ++x) {
      out.push_back(static_cast<std::size_t>(r.y) * width + x);
    }
  }
  return out;
}

bool adjacent8(Point a, Point b) { return std::abs(a.x - b.x) <= 1 && std::abs(a.y - b.y) <= 1; }

void fill(BinaryMask& m, int x0, int y0, int x1, int y1) {
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) m.set(x, y, true);
  }
}

Contour with_area(std::size_t area) {
  Contour c;
  c.area = area;
  return c;
}

void check_boundary(const Contour& c, const BinaryMask& m) {
  REQUIRE_FALSE(c.boundary.empty());
  const BinaryMask own = contours_to_mask({c}, m.width(), m.height());
  for (std::size_t i = 0; i < c.boundary.size(); ++i) {
    const Point p = c.boundary[i];
    const Point q = c.boundary[(i + 1) % c.boundary.size()];
    CHECK(adjacent8(p, q));
    CHECK(c.bbox.contains(p));
    CHECK(own.at(p.x, p.y));
    // Each border pixel touches the outside through a 4-neighbor.
    bool open_side = false;
    for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const int x = p.x + dx, y = p.y + dy;
      if (!m.contains(x, y) || !m.at(x, y)) open_side = true;
    }
    CHECK(open_side);
  }
}

}  // namespace

TEST_CASE("find_contours basics") {
  SUBCASE("empty mask") { CHECK(find_contours(BinaryMask(20, 20)).empty()); }
  SUBCASE("filled 100x100 square") {
    BinaryMask m(140, 130);
    fill(m, 20, 10, 119, 109);
    const auto cs = find_contours(m);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].area == 10000);
    CHECK(cs[0].bbox == BoundingBox{20, 10, 119, 109});
    CHECK(cs[0].boundary.size() == 396);
    CHECK(cs[0].runs.size() == 100);
    check_boundary(cs[0], m);
  }
  SUBCASE("diagonal-touching blocks join under 8-connectivity") {
    BinaryMask m(8, 8);
    fill(m, 0, 0, 2, 2);
    fill(m, 3, 3, 5, 5);
    const auto cs = find_contours(m);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].area == 18);
    CHECK(oracle::components(m).size() == 1);
    check_boundary(cs[0], m);
  }
  SUBCASE("single pixel") {
    BinaryMask m(3, 3);
    m.set(1, 1, true);
    const auto cs = find_contours(m);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].boundary == std::vector<Point>{{1, 1}});
    CHECK(cs[0].area == 1);
  }
  SUBCASE("ring keeps its hole out of the area") {
    BinaryMask m(7, 7);
    fill(m, 1, 1, 5, 5);
    m.set(3, 3, false);
    const auto cs = find_contours(m);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].area == 24);
    CHECK(cs[0].boundary.size() == 16);
  }
}

TEST_CASE("find_contours agrees with flood fill on random masks") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 120; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 64);
    const int h = 1 + static_cast<int>(rng() % 64);
    const double density = 0.05 + 0.7 * static_cast<double>(rng() % 100) / 100.0;
    const BinaryMask m = oracle::random_mask(rng, w, h, density);
    const auto cs = find_contours(m);
    const auto expected = oracle::components(m);
    REQUIRE(cs.size() == expected.size());
    std::size_t total = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      auto pixels = run_pixels(cs[i], w);
      CHECK(std::is_sorted(pixels.begin(), pixels.end()));
      CHECK(pixels == expected[i]);
      CHECK(cs[i].area == pixels.size());
      total += cs[i].area;
      check_boundary(cs[i], m);
    }
    CHECK(total == m.count());
    CHECK(contours_to_mask(cs, w, h) == m);
  }
}

TEST_CASE("filter_contours") {
  const std::vector<Contour> cs = {with_area(9999), with_area(10000), with_area(50000)};
  ContourFilter f;
  const auto kept = filter_contours(cs, f);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].area == 10000);
  CHECK(kept[1].area == 50000);
  CHECK(filter_contours(kept, f).size() == 2);
  CHECK(filter_contours(cs, ContourFilter{1, std::nullopt}).size() == 3);
  CHECK(filter_contours({}, f).empty());
  const auto capped = filter_contours(cs, ContourFilter{1, 20000});
  REQUIRE(capped.size() == 2);
  CHECK(capped[1].area == 10000);
  CHECK_THROWS_AS((ContourFilter{0, std::nullopt}.validate()), Error);
  CHECK_THROWS_AS((ContourFilter{10, 5}.validate()), Error);
}

TEST_CASE("draw_contours") {
  std::mt19937_64 rng(32);
  BinaryMask m(60, 50);
  fill(m, 10, 10, 30, 25);
  fill(m, 40, 30, 55, 45);
  const auto cs = find_contours(m);
  const Pixel red{255, 0, 0};
  const RasterImage black(60, 50, Colorspace::RGB);

  SUBCASE("no contours is the identity") {
    const RasterImage img = testing::random_rgb(rng, 60, 50);
    CHECK(draw_contours(img, {}, red, 3) == img);
  }
  SUBCASE("thickness 1 paints exactly the boundary") {
    const RasterImage out = draw_contours(black, {cs[0]}, red, 1);
    BinaryMask expected(60, 50);
    for (auto p : cs[0].boundary) expected.set(p.x, p.y, true);
    for (int y = 0; y < 50; ++y) {
      for (int x = 0; x < 60; ++x) CHECK((out.at(x, y) == red) == expected.at(x, y));
    }
  }
  SUBCASE("changed pixels stay within the counting bound") {
    const RasterImage img = testing::random_rgb(rng, 60, 50);
    for (int t : {1, 2, 4}) {
      const RasterImage out = draw_contours(img, cs, red, t);
      std::size_t changed = 0, points = 0;
      for (int y = 0; y < 50; ++y) {
        for (int x = 0; x < 60; ++x) changed += out.at(x, y) != img.at(x, y);
      }
      for (const auto& c : cs) points += c.boundary.size();
      CHECK(changed <= points * (2 * t + 1) * (2 * t + 1));
      CHECK(changed > 0);
    }
  }
  SUBCASE("errors") {
    Contour bad = cs[0];
    bad.boundary.push_back({60, 0});
    CHECK_THROWS_AS(draw_contours(black, {bad}, red, 1), Error);
    CHECK_THROWS_AS(draw_contours(black, cs, red, 0), Error);
    CHECK_THROWS_AS(draw_contours(RasterImage(60, 50, Colorspace::HSV), cs, red, 1), Error);
  }
}
