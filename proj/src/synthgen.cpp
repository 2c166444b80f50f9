#include "wiltscan/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wiltscan/error.hpp"
#include "wiltscan/random.hpp"

namespace wiltscan {

namespace {

constexpr int kMaxPaletteDraws = 1000;
constexpr int kMaxPlacementTries = 20'000;

std::uint8_t round_channel(double v) noexcept {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

Pixel draw_from_palette(Rng& rng, const HsvRange& box) {
  for (int attempt = 0; attempt < kMaxPaletteDraws; ++attempt) {
    const HsvPixel hsv{static_cast<std::uint8_t>(uniform_int(rng, box.h_low, box.h_high)),
                       static_cast<std::uint8_t>(uniform_int(rng, box.s_low, box.s_high)),
                       static_cast<std::uint8_t>(uniform_int(rng, box.v_low, box.v_high))};
    const Pixel rgb = hsv_to_rgb_pixel(hsv);
    const HsvPixel back = rgb_to_hsv_pixel(rgb[0], rgb[1], rgb[2]);
    if (box.contains(back.h, back.s, back.v)) return rgb;
  }
  throw Error(ErrorCode::InfeasibleSpec, "palette box yields no RGB color that converts back into it");
}

bool in_disk(const WiltBlob& b, int x, int y) noexcept {
  const long dx = x - b.center.x;
  const long dy = y - b.center.y;
  return dx * dx + dy * dy <= static_cast<long>(b.radius) * b.radius;
}

Category layout_category(const SceneLayout& layout, int y) noexcept {
  const int row = y / layout.row_period;
  const int offset = y % layout.row_period;
  if (offset < layout.vegetation_height) return Category::HealthyVegetation;
  const int gap = offset - layout.vegetation_height;
  if (layout.packing_every > 0 && row % layout.packing_every == layout.packing_every - 1 &&
      gap >= layout.packing_offset && gap < layout.packing_offset + layout.packing_height) {
    return Category::PackingMaterial;
  }
  return Category::Ground;
}

void infeasible(const std::string& why) { throw Error(ErrorCode::InfeasibleSpec, why); }

int min_radius_for_area(std::size_t area) {
  int r = 1;
  while (disk_area({{0, 0}, r}, 0, 0) < area) ++r;
  return r;
}

}  // namespace

Pixel hsv_to_rgb_pixel(const HsvPixel& hsv) noexcept {
  const double v = hsv.v;
  const double chroma = v * hsv.s / 255.0;
  const double sector = (hsv.h * 2.0) / 60.0;
  const double x = chroma * (1.0 - std::abs(std::fmod(sector, 2.0) - 1.0));
  const double m = v - chroma;
  double r = 0;
  double g = 0;
  double b = 0;
  switch (static_cast<int>(sector)) {
    case 0: r = chroma; g = x; break;
    case 1: r = x; g = chroma; break;
    case 2: g = chroma; b = x; break;
    case 3: g = x; b = chroma; break;
    case 4: r = x; b = chroma; break;
    default: r = chroma; b = x; break;
  }
  return {round_channel(r + m), round_channel(g + m), round_channel(b + m)};
}

SceneSpec default_scene_spec() {
  SceneSpec spec;
  for (Category c : kAllCategories) {
    spec.category_ranges[static_cast<std::size_t>(c)] = default_range(c);
  }
  spec.category_palettes[static_cast<std::size_t>(Category::HealthyVegetation)] = {32, 41, 80, 230, 60, 220};
  spec.category_palettes[static_cast<std::size_t>(Category::Ground)] = {16, 19, 100, 220, 50, 200};
  spec.category_palettes[static_cast<std::size_t>(Category::PackingMaterial)] = {95, 125, 20, 110, 150, 240};
  spec.wilt_palette = {22, 27, 100, 220, 90, 220};
  spec.wilt_band = {5, 29, 0, 255, 0, 255};
  return spec;
}

std::size_t disk_area(const WiltBlob& blob, int width, int height) {
  std::size_t n = 0;
  for (int dy = -blob.radius; dy <= blob.radius; ++dy) {
    for (int dx = -blob.radius; dx <= blob.radius; ++dx) {
      if (dx * dx + dy * dy > blob.radius * blob.radius) continue;
      const int x = blob.center.x + dx;
      const int y = blob.center.y + dy;
      // A zero-sized canvas means "unclipped".
      if (width > 0 && (x < 0 || y < 0 || x >= width || y >= height)) continue;
      ++n;
    }
  }
  return n;
}

SceneSpec series_scene_spec(const SceneSpec& base, std::uint64_t seed, int index, int blob_lo,
                            int blob_hi) {
  if (blob_lo < 0 || blob_hi < blob_lo) infeasible("blob count range must satisfy 0 <= lo <= hi");
  SceneSpec spec = base;
  spec.seed = derive_seed(seed, static_cast<std::uint64_t>(index));
  if (base.wilt_blobs.empty()) {
    Rng pick(derive_seed(spec.seed, 0xB10B));
    const int n = static_cast<int>(uniform_int(pick, blob_lo, blob_hi));
    spec.wilt_blobs = place_blobs(spec, n, derive_seed(spec.seed, 0x91ACE));
  }
  return spec;
}

void validate_scene_spec(const SceneSpec& spec) {
  if (spec.width < 1 || spec.height < 1) infeasible("scene dimensions must be positive");
  if (!(spec.noise_rate >= 0.0 && spec.noise_rate <= 1.0)) {
    infeasible("noise_rate must lie in [0, 1]");
  }
  const SceneLayout& l = spec.layout;
  if (l.row_period < 1 || l.vegetation_height < 0 || l.vegetation_height > l.row_period ||
      l.packing_every < 0 || l.packing_offset < 0 || l.packing_height < 0) {
    infeasible("scene layout has a negative or inconsistent extent");
  }
  try {
    spec.wilt_palette.validate();
    spec.wilt_band.validate();
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
      spec.category_palettes[i].validate();
      spec.category_ranges[i].validate();
    }
  } catch (const Error& e) {
    infeasible(std::string("invalid HSV box: ") + e.what());
  }
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    const auto name = std::string(to_string(kAllCategories[i]));
    if (!spec.category_ranges[i].encloses(spec.category_palettes[i])) {
      infeasible(name + " palette leaves its category range");
    }
    for (std::size_t j = 0; j < kCategoryCount; ++j) {
      if (i != j && spec.category_palettes[i].intersects(spec.category_ranges[j])) {
        infeasible(name + " palette overlaps the " +
                   std::string(to_string(kAllCategories[j])) + " range");
      }
    }
    if (spec.wilt_palette.intersects(spec.category_ranges[i])) {
      infeasible("wilt palette overlaps the " + name + " range");
    }
  }
  if (!spec.wilt_band.encloses(spec.wilt_palette)) infeasible("wilt palette leaves the wilt band");
  for (const WiltBlob& b : spec.wilt_blobs) {
    if (b.radius < 0 || b.center.x - b.radius < 0 || b.center.y - b.radius < 0 ||
        b.center.x + b.radius >= spec.width || b.center.y + b.radius >= spec.height) {
      infeasible("wilt blob at (" + std::to_string(b.center.x) + ", " +
                 std::to_string(b.center.y) + ") exceeds the image bounds");
    }
    if (disk_area(b, spec.width, spec.height) < spec.min_blob_area) {
      infeasible("wilt blob of radius " + std::to_string(b.radius) + " is below min_blob_area");
    }
  }
}

std::vector<WiltBlob> place_blobs(const SceneSpec& base, int blob_count, std::uint64_t seed) {
  const int r_min = min_radius_for_area(base.min_blob_area) + 3;
  const int r_max = r_min + 9;
  constexpr int kGap = 12;
  Rng rng(seed);
  std::vector<WiltBlob> blobs;
  int tries = 0;
  while (static_cast<int>(blobs.size()) < blob_count) {
    if (++tries > kMaxPlacementTries) {
      infeasible("cannot place " + std::to_string(blob_count) + " separated blobs in a " +
                 std::to_string(base.width) + "x" + std::to_string(base.height) + " scene");
    }
    const int r = static_cast<int>(uniform_int(rng, r_min, r_max));
    if (2 * r >= base.width || 2 * r >= base.height) continue;
    const WiltBlob cand{{static_cast<int>(uniform_int(rng, r, base.width - 1 - r)),
                         static_cast<int>(uniform_int(rng, r, base.height - 1 - r))},
                        r};
    const bool clear = std::all_of(blobs.begin(), blobs.end(), [&](const WiltBlob& b) {
      const long dx = b.center.x - cand.center.x;
      const long dy = b.center.y - cand.center.y;
      const long reach = b.radius + cand.radius + kGap;
      return dx * dx + dy * dy > reach * reach;
    });
    if (clear) blobs.push_back(cand);
  }
  return blobs;
}

Scene generate_scene(const SceneSpec& spec) {
  validate_scene_spec(spec);
  const int w = spec.width;
  const int h = spec.height;
  Rng rng(spec.seed);

  RasterImage image(w, h, Colorspace::RGB);
  GroundTruth truth{{BinaryMask(w, h), BinaryMask(w, h), BinaryMask(w, h)},
                    BinaryMask(w, h),
                    {},
                    {}};
  for (const WiltBlob& b : spec.wilt_blobs) {
    BinaryMask disk(w, h);
    for (int y = b.center.y - b.radius; y <= b.center.y + b.radius; ++y) {
      for (int x = b.center.x - b.radius; x <= b.center.x + b.radius; ++x) {
        if (in_disk(b, x, y)) disk.set(x, y, true);
      }
    }
    truth.wilt_mask = truth.wilt_mask | disk;
    truth.blob_masks.push_back(std::move(disk));
    truth.wilt_blob_boxes.push_back({b.center.x - b.radius, b.center.y - b.radius,
                                     b.center.x + b.radius, b.center.y + b.radius});
  }

  auto data = image.data();
  for (int y = 0; y < h; ++y) {
    const Category row_category = layout_category(spec.layout, y);
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const bool wilt = truth.wilt_mask[i];
      if (!wilt) truth.category_masks[static_cast<std::size_t>(row_category)].bits()[i] = 1;

      Pixel rgb{};
      if (uniform01(rng) < spec.noise_rate) {
        const HsvPixel noise{static_cast<std::uint8_t>(uniform_int(rng, 0, 179)),
                             static_cast<std::uint8_t>(uniform_int(rng, 0, 255)),
                             static_cast<std::uint8_t>(uniform_int(rng, 0, 255))};
        rgb = hsv_to_rgb_pixel(noise);
      } else if (wilt) {
        rgb = draw_from_palette(rng, spec.wilt_palette);
      } else {
        rgb = draw_from_palette(rng, spec.category_palettes[static_cast<std::size_t>(row_category)]);
      }
      data[3 * i] = rgb[0];
      data[3 * i + 1] = rgb[1];
      data[3 * i + 2] = rgb[2];
    }
  }
  return {std::move(image), std::move(truth)};
}

double DetectionScore::blob_recall() const noexcept {
  return blobs_total == 0 ? 1.0 : static_cast<double>(blobs_detected) / blobs_total;
}

double DetectionScore::pixel_precision() const noexcept {
  return detected_pixels == 0 ? 1.0 : static_cast<double>(overlap_pixels) / detected_pixels;
}

double DetectionScore::pixel_recall() const noexcept {
  return truth_pixels == 0 ? 1.0 : static_cast<double>(overlap_pixels) / truth_pixels;
}

DetectionScore score_detection(const GroundTruth& truth, const std::vector<Contour>& detected) {
  const int w = truth.wilt_mask.width();
  const int h = truth.wilt_mask.height();
  const BinaryMask found = contours_to_mask(detected, w, h);

  DetectionScore score;
  score.blobs_total = truth.blob_masks.size();
  score.detected_pixels = found.count();
  score.truth_pixels = truth.wilt_mask.count();
  score.overlap_pixels = (found & truth.wilt_mask).count();

  for (const BinaryMask& blob : truth.blob_masks) {
    if (!blob.same_shape(truth.wilt_mask)) {
      throw Error(ErrorCode::DimensionMismatch, "blob mask does not match the wilt mask");
    }
    const std::size_t blob_pixels = blob.count();
    for (const Contour& c : detected) {
      std::size_t covered = 0;
      for (const Run& run : c.runs) {
        for (int x = run.x_begin; x < run.x_end; ++x) {
          covered += blob[static_cast<std::size_t>(run.y) * w + x] ? 1 : 0;
        }
      }
      if (blob_pixels > 0 && 2 * covered >= blob_pixels) {
        ++score.blobs_detected;
        break;
      }
    }
  }
  return score;
}

}  // namespace wiltscan
