// Command-line front end: detect, batch, gen, calibrate-report.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wiltscan/config.hpp"
#include "wiltscan/error.hpp"
#include "wiltscan/pipeline.hpp"
#include "wiltscan/png_io.hpp"
#include "wiltscan/synthgen.hpp"

namespace fs = std::filesystem;
using namespace wiltscan;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kProcessing = 2, kPartial = 3 };

struct Overrides {
  std::string config;
  std::optional<int> k;
  std::string k_range;
  std::optional<int> iterations;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> min_area;
  std::string emit;
};

void add_pipeline_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Pipeline configuration (JSON)");
  cmd->add_option("--k", o.k, "Use this many clusters and skip the elbow scan")->check(CLI::PositiveNumber);
  cmd->add_option("--k-range", o.k_range, "Cluster counts scanned for the elbow, as lo..hi");
  cmd->add_option("--iterations", o.iterations, "Lloyd iterations per k-means run")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Clustering seed");
  cmd->add_option("--min-area", o.min_area, "Smallest wilt region kept, in pixels")->check(CLI::PositiveNumber);
  cmd->add_option("--emit", o.emit, "Comma-separated outputs: masks,frames,overlay,report");
}

PipelineConfig build_config(const Overrides& o) {
  PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : load_config(o.config);
  if (o.k) cfg.cluster.fixed_k = *o.k;
  if (!o.k_range.empty()) std::tie(cfg.cluster.k_low, cfg.cluster.k_high) = parse_k_range(o.k_range);
  if (o.iterations) cfg.cluster.iterations = *o.iterations;
  if (o.seed) cfg.cluster.seed = *o.seed;
  if (o.min_area) {
    cfg.contour_filter.min_area = *o.min_area;
    if (cfg.contour_filter.max_area && *cfg.contour_filter.max_area < *o.min_area) {
      throw Error(ErrorCode::ConfigError, "--min-area exceeds the configured max_area");
    }
  }
  if (!o.emit.empty()) {
    OutputToggles t{false, false, false, false, cfg.outputs.timings};
    std::stringstream list(o.emit);
    std::string item;
    while (std::getline(list, item, ',')) {
      if (item == "masks") t.masks = true;
      else if (item == "frames") t.frames = true;
      else if (item == "overlay") t.overlay = true;
      else if (item == "report") t.report = true;
      else throw Error(ErrorCode::ConfigError, "unknown --emit item '" + item + "'");
    }
    cfg.outputs = t;
  }
  cfg.validate();
  return cfg;
}

int run_detect(const std::string& input, const std::string& out_dir, const Overrides& o) {
  PipelineConfig cfg;
  try {
    cfg = build_config(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  try {
    const RasterImage img = load_image(input);
    const PipelineResult result = run_pipeline(img, cfg, input);
    write_outputs(result, cfg, out_dir, fs::path(input).stem().string());
    const DetectionReport& r = result.report;
    std::cout << input << ": " << r.residual_count << " residual pixels, k=" << r.k << ", "
              << r.contours.size() << " wilt region(s)\n";
    for (const StageTiming& t : r.timings) {
      std::cerr << "  " << t.stage << ": " << t.milliseconds << " ms\n";
    }
    return kOk;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return kProcessing;
  }
}

int run_batch_cmd(const std::string& input, const std::string& out_dir, int jobs,
                  const Overrides& o) {
  PipelineConfig cfg;
  try {
    cfg = build_config(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  try {
    const BatchSummary s = run_batch(input, cfg, out_dir, jobs);
    std::cout << s.succeeded << "/" << s.images << " images processed, " << s.total_contours
              << " wilt region(s)\n";
    for (const BatchFailure& f : s.failures) std::cerr << "failed: " << f.file << ": " << f.error << "\n";
    if (s.failures.empty()) return kOk;
    return s.succeeded == 0 ? kProcessing : kPartial;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return kProcessing;
  }
}

struct GenOptions {
  std::string out_dir;
  int count = 1;
  std::uint64_t seed = 1;
  std::optional<int> width;
  std::optional<int> height;
  std::string blobs = "3..6";
  std::optional<double> noise_rate;
  std::optional<std::size_t> min_area;
  std::string scene_config;
};

int run_gen(const GenOptions& g) {
  SceneSpec base = default_scene_spec();
  int blob_lo = 0;
  int blob_hi = 0;
  try {
    if (!g.scene_config.empty()) {
      std::ifstream in(g.scene_config);
      if (!in) throw Error(ErrorCode::FileNotFound, "cannot read scene config " + g.scene_config);
      std::stringstream text;
      text << in.rdbuf();
      base = parse_scene_spec(text.str());
    }
    if (g.width) base.width = *g.width;
    if (g.height) base.height = *g.height;
    if (g.noise_rate) base.noise_rate = *g.noise_rate;
    if (g.min_area) base.min_blob_area = *g.min_area;
    const auto dots = g.blobs.find("..");
    if (dots == std::string::npos) {
      blob_lo = blob_hi = std::stoi(g.blobs);
    } else {
      blob_lo = std::stoi(g.blobs.substr(0, dots));
      blob_hi = std::stoi(g.blobs.substr(dots + 2));
    }
    if (blob_lo < 0 || blob_hi < blob_lo) throw Error(ErrorCode::ConfigError, "--blobs must be lo..hi with 0 <= lo <= hi");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception&) {
    std::cerr << "error: --blobs must be an integer or lo..hi\n";
    return kUsage;
  }

  try {
    fs::create_directories(g.out_dir);
    for (int i = 0; i < g.count; ++i) {
      const SceneSpec spec = series_scene_spec(base, g.seed, i, blob_lo, blob_hi);
      const Scene scene = generate_scene(spec);

      char stem[32];
      std::snprintf(stem, sizeof stem, "scene_%03d", i);
      const fs::path dir(g.out_dir);
      save_image(scene.image, dir / (std::string(stem) + ".png"));
      save_mask(scene.truth.wilt_mask, dir / (std::string(stem) + ".truth.png"));

      nlohmann::ordered_json truth;
      truth["spec"] = nlohmann::ordered_json::parse(serialize_scene_spec(spec));
      nlohmann::ordered_json boxes = nlohmann::ordered_json::array();
      for (std::size_t b = 0; b < scene.truth.wilt_blob_boxes.size(); ++b) {
        const BoundingBox& box = scene.truth.wilt_blob_boxes[b];
        boxes.push_back({{"min_x", box.min_x}, {"min_y", box.min_y}, {"max_x", box.max_x},
                         {"max_y", box.max_y}, {"pixels", scene.truth.blob_masks[b].count()}});
      }
      truth["wilt_blobs"] = boxes;
      truth["wilt_pixels"] = scene.truth.wilt_mask.count();
      nlohmann::ordered_json cats = nlohmann::ordered_json::object();
      for (Category c : kAllCategories) {
        cats[std::string(to_string(c))] = scene.truth.category_masks[static_cast<std::size_t>(c)].count();
      }
      truth["category_pixels"] = cats;
      std::ofstream out(dir / (std::string(stem) + ".truth.json"), std::ios::binary);
      out << truth.dump(2) << "\n";
      if (!out) throw Error(ErrorCode::IoError, "failed to write ground truth for " + std::string(stem));
      std::cout << (dir / (std::string(stem) + ".png")).string() << ": " << spec.wilt_blobs.size()
                << " wilt blob(s)\n";
    }
    return kOk;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return kProcessing;
  }
}

int run_calibrate(const std::string& input, const std::string& out_dir, const Overrides& o) {
  PipelineConfig cfg;
  try {
    cfg = build_config(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  try {
    const RasterImage img = load_image(input);
    const std::string csv = histograms_to_csv(calibration_histograms(img, cfg));
    fs::create_directories(out_dir);
    const fs::path target = fs::path(out_dir) / (fs::path(input).stem().string() + ".histograms.csv");
    std::ofstream out(target, std::ios::binary);
    out << csv;
    if (!out) throw Error(ErrorCode::IoError, "failed to write " + target.string());
    std::cout << target.string() << "\n";
    return kOk;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return kProcessing;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fusarium wilt detection in crop-field images"};
  app.require_subcommand(1);

  std::string input;
  std::string out_dir = ".";
  int jobs = 1;

  Overrides detect_opts;
  auto* detect = app.add_subcommand("detect", "Detect wilt regions in one PNG image");
  detect->add_option("--input", input, "Input PNG")->required();
  detect->add_option("--out-dir", out_dir, "Directory for reports and images");
  add_pipeline_options(detect, detect_opts);

  Overrides batch_opts;
  auto* batch = app.add_subcommand("batch", "Run detection over every PNG in a directory");
  batch->add_option("--input", input, "Input directory")->required();
  batch->add_option("--out-dir", out_dir, "Directory for reports and images")->required();
  batch->add_option("--jobs", jobs, "Images processed concurrently")->check(CLI::PositiveNumber);
  add_pipeline_options(batch, batch_opts);

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "Generate synthetic field scenes with ground truth");
  gen->add_option("--out-dir", gen_opts.out_dir, "Output directory")->required();
  gen->add_option("--count", gen_opts.count, "Number of scenes")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_opts.seed, "Base seed");
  gen->add_option("--width", gen_opts.width, "Scene width")->check(CLI::PositiveNumber);
  gen->add_option("--height", gen_opts.height, "Scene height")->check(CLI::PositiveNumber);
  gen->add_option("--blobs", gen_opts.blobs, "Wilt blobs per scene, n or lo..hi");
  gen->add_option("--noise-rate", gen_opts.noise_rate, "Fraction of pixels given random colors")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--min-area", gen_opts.min_area, "Smallest blob area in pixels")->check(CLI::PositiveNumber);
  gen->add_option("--scene-config", gen_opts.scene_config, "Scene description (JSON)");

  Overrides calib_opts;
  auto* calib = app.add_subcommand("calibrate-report", "Write per-category HSV histograms as CSV");
  calib->add_option("--input", input, "Input PNG")->required();
  calib->add_option("--out-dir", out_dir, "Directory for the CSV file");
  add_pipeline_options(calib, calib_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (detect->parsed()) return run_detect(input, out_dir, detect_opts);
  if (batch->parsed()) return run_batch_cmd(input, out_dir, jobs, batch_opts);
  if (gen->parsed()) return run_gen(gen_opts);
  if (calib->parsed()) return run_calibrate(input, out_dir, calib_opts);
  return kUsage;
}
