#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wiltscan/contour.hpp"
#include "wiltscan/morphology.hpp"
#include "wiltscan/segmentation.hpp"
#include "wiltscan/synthgen.hpp"

namespace wiltscan {

struct CleanupConfig {
  StructuringElement se = StructuringElement::square(3);
  std::vector<MorphOp> sequence;
  friend bool operator==(const CleanupConfig&, const CleanupConfig&) = default;
};

struct ClusterConfig {
  int k_low = 2;
  int k_high = 20;
  std::optional<int> fixed_k;  // skips the elbow scan when set
  int iterations = 20;
  std::uint64_t seed = 1;
  HsvRange wilt_band{5, 29, 0, 255, 0, 255};
  friend bool operator==(const ClusterConfig&, const ClusterConfig&) = default;
};

struct OutputToggles {
  bool masks = false;
  bool frames = false;
  bool overlay = true;
  bool report = true;
  bool timings = false;  // stage timings in the report; off keeps reports reproducible
  friend bool operator==(const OutputToggles&, const OutputToggles&) = default;
};

struct PipelineConfig {
  ProfileSet profiles = default_profiles();
  CleanupConfig residual_cleanup;
  ClusterConfig cluster;
  CleanupConfig wilt_cleanup{StructuringElement::square(3), {MorphOp::Open, MorphOp::Close}};
  ContourFilter contour_filter;
  Pixel overlay_color{255, 0, 0};
  int overlay_thickness = 3;
  OutputToggles outputs;

  // Throws ConfigError on any violated invariant.
  void validate() const;
  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

// JSON text. Keys absent from the document keep their defaults; unknown keys,
// wrong types and out-of-range values raise ConfigError.
PipelineConfig parse_config(std::string_view text);
std::string serialize_config(const PipelineConfig& cfg);
PipelineConfig load_config(const std::filesystem::path& path);

SceneSpec parse_scene_spec(std::string_view text);
std::string serialize_scene_spec(const SceneSpec& spec);

// Parses "lo..hi".
std::pair<int, int> parse_k_range(std::string_view text);

}  // namespace wiltscan
