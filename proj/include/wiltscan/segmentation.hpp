#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "wiltscan/image.hpp"
#include "wiltscan/morphology.hpp"

namespace wiltscan {

// Closed bounds on each HSV channel. Hue ranges do not wrap past 179.
struct HsvRange {
  std::uint8_t h_low = 0;
  std::uint8_t h_high = 179;
  std::uint8_t s_low = 0;
  std::uint8_t s_high = 255;
  std::uint8_t v_low = 0;
  std::uint8_t v_high = 255;

  // Throws InvalidArgument when a bound pair is inverted or hue exceeds 179.
  void validate() const;

  bool contains(std::uint8_t h, std::uint8_t s, std::uint8_t v) const noexcept {
    return h >= h_low && h <= h_high && s >= s_low && s <= s_high && v >= v_low && v <= v_high;
  }
  bool contains(const Pixel& hsv) const noexcept { return contains(hsv[0], hsv[1], hsv[2]); }
  bool intersects(const HsvRange& other) const noexcept;
  bool encloses(const HsvRange& inner) const noexcept;

  friend bool operator==(const HsvRange&, const HsvRange&) = default;
};

enum class Category : std::size_t { HealthyVegetation = 0, Ground = 1, PackingMaterial = 2 };

inline constexpr std::size_t kCategoryCount = 3;
inline constexpr std::array<Category, kCategoryCount> kAllCategories = {
    Category::HealthyVegetation, Category::Ground, Category::PackingMaterial};

std::string_view to_string(Category c) noexcept;
std::optional<Category> parse_category(std::string_view name) noexcept;

// Calibrated default thresholds.
HsvRange default_range(Category c) noexcept;

struct CategoryProfile {
  Category category;
  HsvRange range;
  StructuringElement se = StructuringElement::square(3);
  std::vector<MorphOp> morph_sequence = {MorphOp::Open, MorphOp::Close};

  friend bool operator==(const CategoryProfile&, const CategoryProfile&) = default;
};

// Indexed by Category; the array form guarantees each category appears once.
using ProfileSet = std::array<CategoryProfile, kCategoryCount>;

ProfileSet default_profiles();

struct SegmentationResult {
  std::array<BinaryMask, kCategoryCount> category_masks;
  BinaryMask residual_mask;
  std::array<std::size_t, kCategoryCount> category_counts{};
  std::size_t union_count = 0;
  std::size_t residual_count = 0;

  const BinaryMask& mask(Category c) const { return category_masks[static_cast<std::size_t>(c)]; }
  std::size_t count(Category c) const { return category_counts[static_cast<std::size_t>(c)]; }
};

// Inclusive per-channel test. Throws InvalidColorspace for RGB input.
BinaryMask threshold_mask(const RasterImage& hsv, const HsvRange& range);

// Threshold and clean each category, then take the complement of their union.
SegmentationResult segment_categories(const RasterImage& hsv, const ProfileSet& profiles);

// Original pixels where the residual is set, black elsewhere.
RasterImage apply_residual(const RasterImage& rgb, const BinaryMask& residual);

}  // namespace wiltscan
