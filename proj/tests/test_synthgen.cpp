#include <doctest.h>

#include <random>

#include "wiltscan/colorspace.hpp"
#include "wiltscan/contour.hpp"
#include "wiltscan/error.hpp"
#include "wiltscan/segmentation.hpp"
#include "wiltscan/synthgen.hpp"

using namespace wiltscan;

namespace {

// Independent rasterization: count lattice points inside the closed disk.
std::size_t count_disk(const WiltBlob& b) {
  std::size_t n = 0;
  for (int y = b.center.y - b.radius; y <= b.center.y + b.radius; ++y) {
    for (int x = b.center.x - b.radius; x <= b.center.x + b.radius; ++x) {
      const double dx = x - b.center.x, dy = y - b.center.y;
      if (dx * dx + dy * dy <= static_cast<double>(b.radius) * b.radius) ++n;
    }
  }
  return n;
}

SceneSpec small_spec(std::uint64_t seed) {
  SceneSpec spec = default_scene_spec();
  spec.width = 320;
  spec.height = 240;
  spec.seed = seed;
  return spec;
}

ErrorCode code_of(const SceneSpec& spec) {
  try {
    validate_scene_spec(spec);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ConfigError;
}

}  // namespace

TEST_CASE("hsv_to_rgb_pixel inverts the forward map") {
  CHECK(hsv_to_rgb_pixel({0, 255, 255}) == Pixel{255, 0, 0});
  CHECK(hsv_to_rgb_pixel({60, 255, 255}) == Pixel{0, 255, 0});
  CHECK(hsv_to_rgb_pixel({120, 255, 255}) == Pixel{0, 0, 255});
  CHECK(hsv_to_rgb_pixel({77, 0, 131}) == Pixel{131, 131, 131});
  // Within one unit on every channel after a round trip where hue is defined.
  std::mt19937_64 rng(41);
  for (int i = 0; i < 5000; ++i) {
    const HsvPixel in{static_cast<std::uint8_t>(rng() % 180),
                      static_cast<std::uint8_t>(128 + rng() % 128),
                      static_cast<std::uint8_t>(128 + rng() % 128)};
    const Pixel rgb = hsv_to_rgb_pixel(in);
    const HsvPixel back = rgb_to_hsv_pixel(rgb[0], rgb[1], rgb[2]);
    int dh = std::abs(back.h - in.h);
    dh = std::min(dh, 180 - dh);
    CHECK(dh <= 1);
    CHECK(std::abs(back.s - in.s) <= 2);
    CHECK(std::abs(back.v - in.v) <= 1);
  }
}

TEST_CASE("default scene spec is feasible") {
  const SceneSpec spec = default_scene_spec();
  CHECK_NOTHROW(validate_scene_spec(spec));
  CHECK(spec.width == 1024);
  CHECK(spec.height == 768);
  CHECK(spec.noise_rate == doctest::Approx(0.005));
}

TEST_CASE("generate_scene") {
  SUBCASE("no blobs, no wilt") {
    const Scene s = generate_scene(small_spec(1));
    CHECK(s.truth.wilt_mask.count() == 0);
    CHECK(s.truth.blob_masks.empty());
  }
  SUBCASE("deterministic per seed") {
    SceneSpec spec = small_spec(2);
    spec.min_blob_area = 2000;
    spec.wilt_blobs = place_blobs(spec, 2, 99);
    const Scene a = generate_scene(spec);
    const Scene b = generate_scene(spec);
    CHECK(a.image == b.image);
    CHECK(a.truth.wilt_mask == b.truth.wilt_mask);
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
      CHECK(a.truth.category_masks[i] == b.truth.category_masks[i]);
    }
    spec.seed = 3;
    CHECK_FALSE(generate_scene(spec).image == a.image);
  }
  SUBCASE("three radius-60 blobs") {
    SceneSpec spec = default_scene_spec();
    spec.seed = 4;
    spec.wilt_blobs = {{{150, 150}, 60}, {{500, 400}, 60}, {{850, 600}, 60}};
    const Scene s = generate_scene(spec);
    std::size_t expected = 0;
    for (const auto& b : spec.wilt_blobs) {
      expected += count_disk(b);
      CHECK(count_disk(b) == disk_area(b, 0, 0));
      CHECK(count_disk(b) >= 10000);
    }
    CHECK(s.truth.wilt_mask.count() == expected);
    REQUIRE(s.truth.wilt_blob_boxes.size() == 3);
    CHECK(s.truth.wilt_blob_boxes[0] == BoundingBox{90, 90, 210, 210});
  }
}

TEST_CASE("scene pixels land in their ranges") {
  SceneSpec spec = default_scene_spec();
  spec.seed = 5;
  spec.wilt_blobs = place_blobs(spec, 4, 55);
  const Scene s = generate_scene(spec);
  const RasterImage hsv = rgb_to_hsv_image(s.image);

  SUBCASE("truth masks partition the image") {
    BinaryMask uni = s.truth.wilt_mask;
    for (const auto& m : s.truth.category_masks) {
      CHECK((uni & m).count() == 0);
      uni = uni | m;
    }
    CHECK(uni.count() == hsv.pixel_count());
  }
  SUBCASE("category membership at least 99%") {
    for (Category c : kAllCategories) {
      const BinaryMask& owned = s.truth.category_masks[static_cast<std::size_t>(c)];
      REQUIRE(owned.count() > 0);
      const BinaryMask hit = threshold_mask(hsv, default_range(c)) & owned;
      CHECK(static_cast<double>(hit.count()) >= 0.99 * static_cast<double>(owned.count()));
    }
  }
  SUBCASE("noise-free wilt pixels hit no category and stay in the band") {
    SceneSpec clean = spec;
    clean.noise_rate = 0.0;
    const Scene c = generate_scene(clean);
    const RasterImage chsv = rgb_to_hsv_image(c.image);
    for (Category cat : kAllCategories) {
      CHECK((threshold_mask(chsv, default_range(cat)) & c.truth.wilt_mask).count() == 0);
      const BinaryMask& owned = c.truth.category_masks[static_cast<std::size_t>(cat)];
      CHECK((threshold_mask(chsv, clean.category_palettes[static_cast<std::size_t>(cat)]) & owned) ==
            owned);
    }
    CHECK(c.truth.wilt_mask.subset_of(threshold_mask(chsv, clean.wilt_palette)));
  }
}

TEST_CASE("place_blobs") {
  SceneSpec spec = default_scene_spec();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto blobs = place_blobs(spec, 6, seed);
    REQUIRE(blobs.size() == 6);
    CHECK(place_blobs(spec, 6, seed) == blobs);
    spec.wilt_blobs = blobs;
    CHECK_NOTHROW(validate_scene_spec(spec));
    for (std::size_t i = 0; i < blobs.size(); ++i) {
      CHECK(disk_area(blobs[i], 0, 0) >= spec.min_blob_area);
      for (std::size_t j = i + 1; j < blobs.size(); ++j) {
        const long dx = blobs[i].center.x - blobs[j].center.x;
        const long dy = blobs[i].center.y - blobs[j].center.y;
        const long reach = blobs[i].radius + blobs[j].radius;
        CHECK(dx * dx + dy * dy > reach * reach);
      }
    }
  }
  SceneSpec tiny = small_spec(0);
  tiny.width = 100;
  tiny.height = 100;
  CHECK_THROWS_AS(place_blobs(tiny, 5, 0), Error);
}

TEST_CASE("infeasible scene specs") {
  SceneSpec spec = default_scene_spec();
  SUBCASE("blob outside the image") {
    spec.wilt_blobs = {{{30, 300}, 60}};
    CHECK(code_of(spec) == ErrorCode::InfeasibleSpec);
  }
  SUBCASE("blob below min area") {
    spec.wilt_blobs = {{{300, 300}, 20}};
    CHECK(code_of(spec) == ErrorCode::InfeasibleSpec);
  }
  SUBCASE("wilt palette overlapping ground") {
    spec.wilt_palette.h_low = 18;
    CHECK(code_of(spec) == ErrorCode::InfeasibleSpec);
  }
  SUBCASE("category palette leaving its range") {
    spec.category_palettes[0].h_low = 28;
    CHECK(code_of(spec) == ErrorCode::InfeasibleSpec);
  }
  SUBCASE("packing palette reaching into healthy hues") {
    spec.category_palettes[2].h_low = 50;
    CHECK(code_of(spec) == ErrorCode::InfeasibleSpec);
  }
  SUBCASE("bad noise rate") {
    spec.noise_rate = 1.5;
    CHECK(code_of(spec) == ErrorCode::InfeasibleSpec);
  }
  SUBCASE("generate_scene validates") {
    spec.width = 0;
    CHECK_THROWS_AS(generate_scene(spec), Error);
  }
}

TEST_CASE("score_detection") {
  SceneSpec spec = small_spec(6);
  spec.noise_rate = 0.0;
  spec.min_blob_area = 1000;
  spec.wilt_blobs = {{{60, 60}, 30}, {{220, 160}, 40}};
  const Scene s = generate_scene(spec);
  const std::size_t truth_pixels = s.truth.wilt_mask.count();

  SUBCASE("exact truth") {
    const DetectionScore d = score_detection(s.truth, find_contours(s.truth.wilt_mask));
    CHECK(d.blobs_total == 2);
    CHECK(d.blob_recall() == 1.0);
    CHECK(d.pixel_precision() == 1.0);
    CHECK(d.pixel_recall() == 1.0);
  }
  SUBCASE("nothing detected") {
    const DetectionScore d = score_detection(s.truth, {});
    CHECK(d.blob_recall() == 0.0);
    CHECK(d.pixel_recall() == 0.0);
  }
  SUBCASE("truth plus n extra pixels") {
    BinaryMask m = s.truth.wilt_mask;
    std::size_t n = 0;
    for (int x = 0; x < 300; x += 3) {
      m.set(x, 235, true);
      ++n;
    }
    const DetectionScore d = score_detection(s.truth, find_contours(m));
    CHECK(d.pixel_precision() ==
          doctest::Approx(static_cast<double>(truth_pixels) / (truth_pixels + n)));
    CHECK(d.pixel_recall() == 1.0);
  }
  SUBCASE("half coverage counts, less does not") {
    const BinaryMask& blob = s.truth.blob_masks[0];
    const std::size_t need = (blob.count() + 1) / 2;
    BinaryMask half(blob.width(), blob.height());
    std::size_t taken = 0;
    for (std::size_t i = 0; i < blob.bits().size() && taken < need; ++i) {
      if (blob[i]) {
        half.bits()[i] = 1;
        ++taken;
      }
    }
    CHECK(score_detection(s.truth, find_contours(half)).blobs_detected == 1);
    BinaryMask short_of = half;
    for (std::size_t i = short_of.bits().size(); i-- > 0;) {
      if (short_of[i]) {
        short_of.bits()[i] = 0;
        break;
      }
    }
    CHECK(score_detection(s.truth, find_contours(short_of)).blobs_detected == 0);
  }
  SUBCASE("dimension mismatch") {
    GroundTruth broken = s.truth;
    broken.blob_masks[0] = BinaryMask(10, 10);
    CHECK_THROWS_AS(score_detection(broken, {}), Error);
  }
}
