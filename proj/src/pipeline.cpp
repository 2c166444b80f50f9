#include "wiltscan/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <type_traits>

#include <json.hpp>

#include "wiltscan/colorspace.hpp"
#include "wiltscan/error.hpp"
#include "wiltscan/png_io.hpp"

namespace wiltscan {

namespace {

using Json = nlohmann::ordered_json;

class StageRunner {
 public:
  explicit StageRunner(std::vector<StageTiming>& timings) : timings_(timings) {}

  template <typename F>
  auto operator()(const char* name, F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto record = [&] {
      const std::chrono::duration<double, std::milli> elapsed =
          std::chrono::steady_clock::now() - start;
      timings_.push_back({name, elapsed.count()});
    };
    try {
      if constexpr (std::is_void_v<std::invoke_result_t<F>>) {
        fn();
        record();
      } else {
        auto value = fn();
        record();
        return value;
      }
    } catch (const StageError&) {
      throw;
    } catch (const Error& e) {
      throw StageError(name, e);
    }
  }

 private:
  std::vector<StageTiming>& timings_;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed to write " + path.string());
}

bool has_png_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png";
}

Json bbox_json(const BoundingBox& b) {
  return Json{{"min_x", b.min_x}, {"min_y", b.min_y}, {"max_x", b.max_x}, {"max_y", b.max_y}};
}

}  // namespace

std::vector<int> scan_k_values(const ClusterConfig& cfg, std::size_t samples) {
  std::vector<int> out;
  if (samples == 0) return out;
  const auto cap = static_cast<int>(std::min<std::size_t>(samples, static_cast<std::size_t>(cfg.k_high)));
  if (cfg.k_low > cap) return {cap};
  for (int k = cfg.k_low; k <= cap; ++k) out.push_back(k);
  return out;
}

PipelineResult run_pipeline(const RasterImage& rgb, const PipelineConfig& cfg,
                            const std::string& image_path) {
  cfg.validate();
  PipelineResult result;
  DetectionReport& report = result.report;
  PipelineArtifacts& art = result.artifacts;
  StageRunner stage(report.timings);

  report.image_path = image_path;
  report.width = rgb.width();
  report.height = rgb.height();

  const RasterImage hsv = stage("colorspace", [&] { return rgb_to_hsv_image(rgb); });
  art.segmentation = stage("segment", [&] { return segment_categories(hsv, cfg.profiles); });
  BinaryMask residual = art.segmentation->residual_mask;
  if (!cfg.residual_cleanup.sequence.empty()) {
    residual = stage("residual_cleanup", [&] {
      return apply_morphology(residual, cfg.residual_cleanup.se, cfg.residual_cleanup.sequence);
    });
  }
  report.category_counts = art.segmentation->category_counts;
  report.union_count = art.segmentation->union_count;
  report.residual_count = residual.count();

  art.noisy_wilt = stage("residual", [&] { return apply_residual(rgb, residual); });
  const std::vector<PixelSample> samples =
      stage("samples", [&] { return collect_samples(hsv, residual); });
  report.sample_count = samples.size();

  BinaryMask wilt(rgb.width(), rgb.height());
  if (!samples.empty()) {
    const ClusterConfig& cc = cfg.cluster;
    int k = 0;
    if (cc.fixed_k) {
      k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(*cc.fixed_k), samples.size()));
    } else {
      report.elbow = stage("elbow", [&] {
        return elbow_scan(samples, {scan_k_values(cc, samples.size()), cc.iterations, cc.seed, cc.wilt_band});
      });
      k = report.elbow->chosen_k;
    }
    report.k = k;

    const ClusterModel model = stage("kmeans", [&] {
      return kmeans(samples, {k, cc.iterations, seed_for_k(cc.seed, k)});
    });
    const std::size_t chosen = stage("select", [&] { return select_wilt_cluster(model, cc.wilt_band); });
    report.wilt_cluster = chosen;
    report.wilt_centroid = model.centroids[chosen];
    report.wilt_clusters = clusters_in_band(model, cc.wilt_band);
    if (report.wilt_clusters.empty()) report.wilt_clusters.push_back(chosen);

    art.frames = stage("frames", [&] { return cluster_frames(model, samples, rgb.width(), rgb.height()); });
    for (std::size_t c : report.wilt_clusters) wilt = wilt | art.frames[c];
    if (!cfg.wilt_cleanup.sequence.empty()) {
      wilt = stage("wilt_cleanup", [&] {
        return apply_morphology(wilt, cfg.wilt_cleanup.se, cfg.wilt_cleanup.sequence);
      });
    }
  }
  report.wilt_pixels = wilt.count();

  const std::vector<Contour> found = stage("contours", [&] { return find_contours(wilt); });
  report.contours_found = found.size();
  art.contours = filter_contours(found, cfg.contour_filter);
  for (const Contour& c : art.contours) report.contours.push_back({c.area, c.bbox});
  art.wilt_mask = std::move(wilt);

  art.overlay = stage("overlay", [&] {
    return draw_contours(rgb, art.contours, cfg.overlay_color, cfg.overlay_thickness);
  });
  return result;
}

std::string report_to_json(const DetectionReport& r, bool include_timings) {
  Json categories = Json::object();
  for (Category c : kAllCategories) {
    categories[std::string(to_string(c))] = r.category_counts[static_cast<std::size_t>(c)];
  }
  Json doc{{"image", r.image_path},
           {"width", r.width},
           {"height", r.height},
           {"category_pixels", categories},
           {"category_union_pixels", r.union_count},
           {"residual_pixels", r.residual_count},
           {"samples", r.sample_count}};
  if (r.elbow) {
    doc["elbow"] = Json{{"k_values", r.elbow->k_values},
                        {"wilt_pixel_counts", r.elbow->wilt_pixel_counts},
                        {"chosen_k", r.elbow->chosen_k}};
  } else {
    doc["elbow"] = nullptr;
  }
  doc["k"] = r.k;
  if (r.wilt_cluster && r.wilt_centroid) {
    const Pixel hsv = centroid_to_hsv(*r.wilt_centroid);
    doc["wilt_cluster"] = Json{{"index", *r.wilt_cluster},
                               {"centroid", *r.wilt_centroid},
                               {"centroid_hsv", {hsv[0], hsv[1], hsv[2]}},
                               {"merged_clusters", r.wilt_clusters}};
  } else {
    doc["wilt_cluster"] = nullptr;
  }
  doc["wilt_pixels"] = r.wilt_pixels;
  doc["contours_found"] = r.contours_found;
  Json kept = Json::array();
  for (const ContourSummary& c : r.contours) {
    kept.push_back(Json{{"area", c.area}, {"bbox", bbox_json(c.bbox)}});
  }
  doc["contours"] = kept;
  if (include_timings) {
    Json timing = Json::object();
    for (const StageTiming& t : r.timings) timing[t.stage] = t.milliseconds;
    doc["timing_ms"] = timing;
  }
  return doc.dump(2) + "\n";
}

std::vector<std::string> validate_report(const DetectionReport& r, const ContourFilter& filter) {
  std::vector<std::string> problems;
  const std::size_t total = static_cast<std::size_t>(r.width) * static_cast<std::size_t>(r.height);
  if (r.width < 1 || r.height < 1) problems.push_back("image dimensions must be positive");
  if (r.residual_count + r.union_count != total) {
    problems.push_back("residual pixels do not equal the image area minus the category union");
  }
  for (std::size_t c : r.category_counts) {
    if (c > r.union_count) problems.push_back("a category count exceeds the category union");
  }
  if (r.sample_count > r.residual_count) problems.push_back("more samples than residual pixels");
  if (r.wilt_pixels > total) problems.push_back("wilt mask larger than the image");
  if (r.contours.size() > r.contours_found) problems.push_back("more contours kept than found");
  for (const ContourSummary& c : r.contours) {
    if (!filter.accepts(c.area)) problems.push_back("kept contour area outside the filter bounds");
    if (c.bbox.min_x < 0 || c.bbox.min_y < 0 || c.bbox.max_x >= r.width ||
        c.bbox.max_y >= r.height || c.bbox.min_x > c.bbox.max_x || c.bbox.min_y > c.bbox.max_y) {
      problems.push_back("contour bounding box outside the image");
    }
  }
  if (r.elbow) {
    const auto& e = *r.elbow;
    if (e.k_values.size() != e.wilt_pixel_counts.size()) {
      problems.push_back("elbow counts do not align with k values");
    }
    if (std::find(e.k_values.begin(), e.k_values.end(), e.chosen_k) == e.k_values.end()) {
      problems.push_back("chosen k is not among the scanned k values");
    }
    if (e.chosen_k != r.k) problems.push_back("clustering k differs from the elbow choice");
  }
  if (r.sample_count == 0) {
    if (r.k != 0 || r.wilt_cluster || !r.contours.empty()) {
      problems.push_back("empty residual must yield an empty detection");
    }
  } else {
    if (r.k < 1 || static_cast<std::size_t>(r.k) > r.sample_count) {
      problems.push_back("k outside [1, samples]");
    }
    if (!r.wilt_cluster || *r.wilt_cluster >= static_cast<std::size_t>(r.k)) {
      problems.push_back("wilt cluster index outside [0, k)");
    }
  }
  return problems;
}

std::vector<std::filesystem::path> write_outputs(const PipelineResult& result,
                                                 const PipelineConfig& cfg,
                                                 const std::filesystem::path& out_dir,
                                                 const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto target = [&](const std::string& stage, const char* ext) {
    written.push_back(out_dir / (stem + "." + stage + ext));
    return written.back();
  };
  const PipelineArtifacts& art = result.artifacts;
  if (cfg.outputs.masks) {
    for (Category c : kAllCategories) {
      save_mask(art.segmentation->mask(c), target("mask_" + std::string(to_string(c)), ".png"));
    }
    save_mask(art.segmentation->residual_mask, target("residual", ".png"));
    save_image(*art.noisy_wilt, target("noisy_wilt", ".png"));
    save_mask(*art.wilt_mask, target("wilt", ".png"));
  }
  if (cfg.outputs.frames) {
    for (std::size_t i = 0; i < art.frames.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "frame_%02zu", i);
      save_mask(art.frames[i], target(name, ".png"));
    }
  }
  if (cfg.outputs.overlay) save_image(*art.overlay, target("overlay", ".png"));
  if (cfg.outputs.report) {
    write_text(target("report", ".json"), report_to_json(result.report, cfg.outputs.timings));
  }
  return written;
}

std::string summary_to_json(const BatchSummary& s) {
  Json failures = Json::array();
  for (const BatchFailure& f : s.failures) failures.push_back(Json{{"file", f.file}, {"error", f.error}});
  Json doc{{"images", s.images},
           {"succeeded", s.succeeded},
           {"failed", s.failures.size()},
           {"total_contours", s.total_contours},
           {"reports", s.reports},
           {"failures", failures}};
  return doc.dump(2) + "\n";
}

BatchSummary run_batch(const std::filesystem::path& dir, const PipelineConfig& cfg,
                       const std::filesystem::path& out_dir, int jobs) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::FileNotFound, "no such directory: " + dir.string());
  }
  std::vector<std::filesystem::path> inputs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && has_png_extension(entry.path())) inputs.push_back(entry.path());
  }
  if (inputs.empty()) throw Error(ErrorCode::EmptyDirectory, "no PNG images in " + dir.string());
  std::sort(inputs.begin(), inputs.end());
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

  struct Outcome {
    std::optional<std::size_t> contours;
    std::string error;
  };
  std::vector<Outcome> outcomes(inputs.size());
  const auto n = static_cast<std::ptrdiff_t>(inputs.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, jobs))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& path = inputs[static_cast<std::size_t>(i)];
    Outcome& out = outcomes[static_cast<std::size_t>(i)];
    try {
      const RasterImage img = load_image(path);
      const PipelineResult result = run_pipeline(img, cfg, path.string());
      write_outputs(result, cfg, out_dir, path.stem().string());
      out.contours = result.report.contours.size();
    } catch (const Error& e) {
      out.error = std::string(to_string(e.code())) + ": " + e.what();
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  }

  BatchSummary summary;
  summary.images = inputs.size();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (outcomes[i].contours) {
      ++summary.succeeded;
      summary.total_contours += *outcomes[i].contours;
      if (cfg.outputs.report) summary.reports.push_back(inputs[i].stem().string() + ".report.json");
    } else {
      summary.failures.push_back({inputs[i].filename().string(), outcomes[i].error});
    }
  }
  write_text(out_dir / "summary.json", summary_to_json(summary));
  return summary;
}

ChannelHistograms calibration_histograms(const RasterImage& rgb, const PipelineConfig& cfg) {
  cfg.validate();
  const RasterImage hsv = rgb_to_hsv_image(rgb);
  const SegmentationResult seg = segment_categories(hsv, cfg.profiles);
  ChannelHistograms hist;
  const auto data = hsv.data();
  for (std::size_t region = 0; region <= kCategoryCount; ++region) {
    const BinaryMask& mask = region < kCategoryCount ? seg.category_masks[region] : seg.residual_mask;
    auto& counts = hist.counts[region];
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask[i]) continue;
      for (std::size_t ch = 0; ch < 3; ++ch) ++counts[ch][data[3 * i + ch]];
    }
  }
  return hist;
}

std::string histograms_to_csv(const ChannelHistograms& hist) {
  std::string out = "channel,value";
  for (Category c : kAllCategories) out += "," + std::string(to_string(c));
  out += ",residual\n";
  constexpr std::array<const char*, 3> kNames = {"h", "s", "v"};
  for (std::size_t ch = 0; ch < 3; ++ch) {
    const std::size_t limit = ch == 0 ? 180 : 256;
    for (std::size_t value = 0; value < limit; ++value) {
      out += std::string(kNames[ch]) + "," + std::to_string(value);
      for (const auto& region : hist.counts) out += "," + std::to_string(region[ch][value]);
      out += "\n";
    }
  }
  return out;
}

}  // namespace wiltscan
