#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wiltscan/cluster.hpp"
#include "wiltscan/config.hpp"
#include "wiltscan/contour.hpp"
#include "wiltscan/image.hpp"
#include "wiltscan/segmentation.hpp"

namespace wiltscan {

struct StageTiming {
  std::string stage;
  double milliseconds = 0.0;
};

struct ContourSummary {
  std::size_t area = 0;
  BoundingBox bbox;
};

struct DetectionReport {
  std::string image_path;
  int width = 0;
  int height = 0;
  std::array<std::size_t, kCategoryCount> category_counts{};
  std::size_t union_count = 0;
  std::size_t residual_count = 0;
  std::size_t sample_count = 0;
  std::optional<ElbowScan> elbow;  // absent when k was fixed or nothing was clustered
  int k = 0;                       // 0 when the residual was empty
  std::optional<std::size_t> wilt_cluster;
  std::optional<Centroid> wilt_centroid;
  std::vector<std::size_t> wilt_clusters;  // clusters merged into the wilt mask
  std::size_t wilt_pixels = 0;             // after cleanup
  std::size_t contours_found = 0;
  std::vector<ContourSummary> contours;    // kept after filtering
  std::vector<StageTiming> timings;
};

struct PipelineArtifacts {
  std::optional<SegmentationResult> segmentation;
  std::optional<RasterImage> noisy_wilt;
  std::vector<BinaryMask> frames;
  std::optional<BinaryMask> wilt_mask;
  std::vector<Contour> contours;
  std::optional<RasterImage> overlay;
};

struct PipelineResult {
  DetectionReport report;
  PipelineArtifacts artifacts;
};

// HSV conversion, category segmentation, residual extraction, clustering of
// the residual, wilt-mask assembly, contour extraction and overlay drawing.
// Errors surface as StageError naming the failing stage.
PipelineResult run_pipeline(const RasterImage& rgb, const PipelineConfig& cfg,
                            const std::string& image_path = {});

// k values scanned for a residual of n samples: the configured range capped at
// n, or {n} when even the lower bound exceeds n.
std::vector<int> scan_k_values(const ClusterConfig& cfg, std::size_t samples);

std::string report_to_json(const DetectionReport& report, bool include_timings);

// Lists every violated consistency rule; empty means the report is sound.
std::vector<std::string> validate_report(const DetectionReport& report,
                                         const ContourFilter& filter);

// Writes the artifacts enabled in cfg.outputs as <stem>.<stage>.png and
// <stem>.report.json under out_dir. Returns the written paths.
std::vector<std::filesystem::path> write_outputs(const PipelineResult& result,
                                                 const PipelineConfig& cfg,
                                                 const std::filesystem::path& out_dir,
                                                 const std::string& stem);

struct BatchFailure {
  std::string file;
  std::string error;
};

struct BatchSummary {
  std::size_t images = 0;
  std::size_t succeeded = 0;
  std::size_t total_contours = 0;
  std::vector<std::string> reports;
  std::vector<BatchFailure> failures;
};

// Runs every *.png in dir (sorted by name) and writes summary.json. Failures
// are recorded, not thrown. Throws FileNotFound or EmptyDirectory.
BatchSummary run_batch(const std::filesystem::path& dir, const PipelineConfig& cfg,
                       const std::filesystem::path& out_dir, int jobs = 1);

std::string summary_to_json(const BatchSummary& summary);

// Per-channel HSV histograms of each cleaned category mask and of the residual,
// for hand-tuning the category thresholds.
struct ChannelHistograms {
  // [region][channel][value]; regions are the categories followed by the residual.
  std::array<std::array<std::array<std::size_t, 256>, 3>, kCategoryCount + 1> counts{};
};

ChannelHistograms calibration_histograms(const RasterImage& rgb, const PipelineConfig& cfg);

// Columns: channel,value,healthy_vegetation,ground,packing_material,residual.
// Hue rows stop at 179.
std::string histograms_to_csv(const ChannelHistograms& hist);

}  // namespace wiltscan
