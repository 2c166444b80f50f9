#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "wiltscan/colorspace.hpp"
#include "wiltscan/contour.hpp"
#include "wiltscan/image.hpp"
#include "wiltscan/segmentation.hpp"

namespace wiltscan {

// Inverse of the hexcone map, rounded to the nearest RGB lattice point. Used
// only to synthesize test scenes.
Pixel hsv_to_rgb_pixel(const HsvPixel& hsv) noexcept;

struct WiltBlob {
  Point center;
  int radius = 0;
  friend bool operator==(const WiltBlob&, const WiltBlob&) = default;
};

// Horizontal crop rows repeating every `row_period` pixels: vegetation on top,
// ground below it, and every `packing_every`-th gap carries a packing strip.
struct SceneLayout {
  int row_period = 96;
  int vegetation_height = 56;
  int packing_every = 3;
  int packing_offset = 8;
  int packing_height = 20;
  friend bool operator==(const SceneLayout&, const SceneLayout&) = default;
};

struct SceneSpec {
  int width = 1024;
  int height = 768;
  std::uint64_t seed = 0;
  std::array<HsvRange, kCategoryCount> category_palettes{};
  HsvRange wilt_palette;
  std::vector<WiltBlob> wilt_blobs;
  double noise_rate = 0.005;
  SceneLayout layout;

  // Category ranges and wilt band the palettes are checked against.
  std::array<HsvRange, kCategoryCount> category_ranges{};
  HsvRange wilt_band;
  std::size_t min_blob_area = 10'000;

  friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

// Palettes that sit inside their own default category range and clear every
// other one; wilt pixels fall in the default wilt band and in no category.
SceneSpec default_scene_spec();

// Places `blob_count` non-overlapping disks whose rasterized area clears
// min_blob_area. Throws InfeasibleSpec when they cannot be placed.
std::vector<WiltBlob> place_blobs(const SceneSpec& base, int blob_count, std::uint64_t seed);

// Scene `index` of a seeded series: its own seed and, unless the base already
// lists blobs, between blob_lo and blob_hi freshly placed blobs.
SceneSpec series_scene_spec(const SceneSpec& base, std::uint64_t seed, int index, int blob_lo,
                            int blob_hi);

// Throws InfeasibleSpec naming the violated constraint.
void validate_scene_spec(const SceneSpec& spec);

struct GroundTruth {
  std::array<BinaryMask, kCategoryCount> category_masks;
  BinaryMask wilt_mask;
  std::vector<BinaryMask> blob_masks;  // one disk per blob, clipped to the image
  std::vector<BoundingBox> wilt_blob_boxes;
};

struct Scene {
  RasterImage image;
  GroundTruth truth;
};

std::size_t disk_area(const WiltBlob& blob, int width, int height);

Scene generate_scene(const SceneSpec& spec);

struct DetectionScore {
  std::size_t blobs_total = 0;
  std::size_t blobs_detected = 0;
  std::size_t detected_pixels = 0;
  std::size_t truth_pixels = 0;
  std::size_t overlap_pixels = 0;

  // Empty denominators score 1.0.
  double blob_recall() const noexcept;
  double pixel_precision() const noexcept;
  double pixel_recall() const noexcept;
};

// A blob counts as found when one detected component covers at least half of it.
DetectionScore score_detection(const GroundTruth& truth, const std::vector<Contour>& detected);

}  // namespace wiltscan
