#include "wiltscan/segmentation.hpp"

#include <cstddef>
#include <string>

#include "wiltscan/error.hpp"

namespace wiltscan {

void HsvRange::validate() const {
  if (h_high > 179) {
    throw Error(ErrorCode::InvalidArgument, "hue bound " + std::to_string(h_high) + " exceeds 179");
  }
  if (h_low > h_high || s_low > s_high || v_low > v_high) {
    throw Error(ErrorCode::InvalidArgument, "HSV range has a low bound above its high bound");
  }
}

bool HsvRange::intersects(const HsvRange& o) const noexcept {
  return h_low <= o.h_high && o.h_low <= h_high && s_low <= o.s_high && o.s_low <= s_high &&
         v_low <= o.v_high && o.v_low <= v_high;
}

bool HsvRange::encloses(const HsvRange& in) const noexcept {
  return h_low <= in.h_low && in.h_high <= h_high && s_low <= in.s_low &&
         in.s_high <= s_high && v_low <= in.v_low && in.v_high <= v_high;
}

std::string_view to_string(Category c) noexcept {
  switch (c) {
    case Category::HealthyVegetation: return "healthy_vegetation";
    case Category::Ground: return "ground";
    case Category::PackingMaterial: return "packing_material";
  }
  return "?";
}

std::optional<Category> parse_category(std::string_view name) noexcept {
  for (Category c : kAllCategories) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

HsvRange default_range(Category c) noexcept {
  switch (c) {
    case Category::HealthyVegetation: return {30, 65, 59, 255, 43, 255};
    case Category::Ground: return {15, 20, 85, 255, 35, 255};
    case Category::PackingMaterial: return {43, 179, 0, 255, 0, 255};
  }
  return {};
}

ProfileSet default_profiles() {
  return {CategoryProfile{Category::HealthyVegetation, default_range(Category::HealthyVegetation)},
          CategoryProfile{Category::Ground, default_range(Category::Ground)},
          CategoryProfile{Category::PackingMaterial, default_range(Category::PackingMaterial)}};
}

BinaryMask threshold_mask(const RasterImage& hsv, const HsvRange& range) {
  if (hsv.colorspace() != Colorspace::HSV) {
    throw Error(ErrorCode::InvalidColorspace, "threshold_mask expects an HSV image");
  }
  BinaryMask out(hsv.width(), hsv.height());
  const std::uint8_t* src = hsv.data().data();
  std::uint8_t* dst = out.bits().data();
  const auto n = static_cast<std::ptrdiff_t>(hsv.pixel_count());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    dst[i] = range.contains(src[3 * i], src[3 * i + 1], src[3 * i + 2]) ? 1 : 0;
  }
  return out;
}

SegmentationResult segment_categories(const RasterImage& hsv, const ProfileSet& profiles) {
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    if (profiles[i].category != kAllCategories[i]) {
      throw Error(ErrorCode::InvalidArgument, "profile set is not ordered by category");
    }
    profiles[i].range.validate();
  }

  std::array<BinaryMask, kCategoryCount> masks = {
      BinaryMask(hsv.width(), hsv.height()), BinaryMask(hsv.width(), hsv.height()),
      BinaryMask(hsv.width(), hsv.height())};
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    masks[i] = apply_morphology(threshold_mask(hsv, profiles[i].range), profiles[i].se,
                                profiles[i].morph_sequence);
  }

  BinaryMask covered = masks[0] | masks[1] | masks[2];
  SegmentationResult result{masks, covered.complement()};
  for (std::size_t i = 0; i < kCategoryCount; ++i) result.category_counts[i] = masks[i].count();
  result.union_count = covered.count();
  result.residual_count = result.residual_mask.count();
  return result;
}

RasterImage apply_residual(const RasterImage& rgb, const BinaryMask& residual) {
  if (rgb.width() != residual.width() || rgb.height() != residual.height()) {
    throw Error(ErrorCode::DimensionMismatch, "residual mask does not match image dimensions");
  }
  if (rgb.colorspace() != Colorspace::RGB) {
    throw Error(ErrorCode::InvalidColorspace, "apply_residual expects an RGB image");
  }
  RasterImage out(rgb.width(), rgb.height(), Colorspace::RGB);
  const auto src = rgb.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < residual.size(); ++i) {
    if (residual[i]) {
      dst[3 * i] = src[3 * i];
      dst[3 * i + 1] = src[3 * i + 1];
      dst[3 * i + 2] = src[3 * i + 2];
    }
  }
  return out;
}

}  // namespace wiltscan
