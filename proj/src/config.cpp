#include "wiltscan/config.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "wiltscan/error.hpp"

namespace wiltscan {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::ConfigError, (path.empty() ? std::string("config") : path) + ": " + message);
}

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void expect_object(const Json& j, const std::string& path,
                   std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (auto key : allowed) known = known || item.key() == key;
    if (!known) fail(join(path, item.key()), "unknown key");
  }
}

std::int64_t get_integer(const Json& j, const std::string& path, std::int64_t lo, std::int64_t hi) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.is_number_unsigned() ? static_cast<std::int64_t>(j.get<std::uint64_t>())
                                        : j.get<std::int64_t>();
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(hi)) {
    fail(path, "value out of range");
  }
  if (v < lo || v > hi) {
    fail(path, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                   std::to_string(hi) + "]");
  }
  return v;
}

std::uint64_t get_seed(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    fail(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

bool get_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

double get_double(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::pair<int, int> get_bounds(const Json& j, const std::string& path, int lo, int hi) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [low, high]");
  const int a = static_cast<int>(get_integer(j[0], path + "[0]", lo, hi));
  const int b = static_cast<int>(get_integer(j[1], path + "[1]", lo, hi));
  if (a > b) fail(path, "low bound exceeds high bound");
  return {a, b};
}

HsvRange parse_range(const Json& j, const std::string& path, HsvRange range) {
  expect_object(j, path, {"h", "s", "v"});
  if (j.contains("h")) {
    const auto [lo, hi] = get_bounds(j["h"], join(path, "h"), 0, 179);
    range.h_low = static_cast<std::uint8_t>(lo);
    range.h_high = static_cast<std::uint8_t>(hi);
  }
  if (j.contains("s")) {
    const auto [lo, hi] = get_bounds(j["s"], join(path, "s"), 0, 255);
    range.s_low = static_cast<std::uint8_t>(lo);
    range.s_high = static_cast<std::uint8_t>(hi);
  }
  if (j.contains("v")) {
    const auto [lo, hi] = get_bounds(j["v"], join(path, "v"), 0, 255);
    range.v_low = static_cast<std::uint8_t>(lo);
    range.v_high = static_cast<std::uint8_t>(hi);
  }
  return range;
}

Json range_to_json(const HsvRange& r) {
  return Json{{"h", {r.h_low, r.h_high}}, {"s", {r.s_low, r.s_high}}, {"v", {r.v_low, r.v_high}}};
}

StructuringElement parse_se(const Json& j, const std::string& path) {
  expect_object(j, path, {"shape", "size", "rows"});
  try {
    if (j.contains("rows")) {
      if (j.contains("shape") || j.contains("size")) fail(path, "give either rows or shape/size");
      const Json& rows = j["rows"];
      if (!rows.is_array()) fail(join(path, "rows"), "expected an array of strings");
      std::vector<std::string> lines;
      for (const auto& r : rows) {
        if (!r.is_string()) fail(join(path, "rows"), "expected an array of strings");
        lines.push_back(r.get<std::string>());
      }
      return StructuringElement::from_rows(lines);
    }
    if (!j.contains("shape")) fail(path, "missing shape or rows");
    if (!j["shape"].is_string()) fail(join(path, "shape"), "expected a string");
    const auto shape = j["shape"].get<std::string>();
    const int size = j.contains("size") ? static_cast<int>(get_integer(j["size"], join(path, "size"), 1, 255)) : 3;
    if (shape == "square") return StructuringElement::square(size);
    if (shape == "cross") return StructuringElement::cross(size);
    if (shape == "disk") return StructuringElement::disk(size);
    fail(join(path, "shape"), "unknown shape '" + shape + "'");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    fail(path, e.what());
  }
}

Json se_to_json(const StructuringElement& se) { return Json{{"rows", se.rows()}}; }

std::vector<MorphOp> parse_sequence(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of operation names");
  std::vector<MorphOp> out;
  for (const auto& op : j) {
    if (!op.is_string()) fail(path, "expected an array of operation names");
    try {
      out.push_back(parse_morph_op(op.get<std::string>()));
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }
  return out;
}

Json sequence_to_json(const std::vector<MorphOp>& seq) {
  Json out = Json::array();
  for (MorphOp op : seq) out.push_back(std::string(to_string(op)));
  return out;
}

CleanupConfig parse_cleanup(const Json& j, const std::string& path, CleanupConfig cfg) {
  expect_object(j, path, {"structuring_element", "morphology"});
  if (j.contains("structuring_element")) {
    cfg.se = parse_se(j["structuring_element"], join(path, "structuring_element"));
  }
  if (j.contains("morphology")) cfg.sequence = parse_sequence(j["morphology"], join(path, "morphology"));
  return cfg;
}

Json cleanup_to_json(const CleanupConfig& c) {
  return Json{{"structuring_element", se_to_json(c.se)}, {"morphology", sequence_to_json(c.sequence)}};
}

Pixel parse_color(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected [r, g, b]");
  Pixel p{};
  for (std::size_t i = 0; i < 3; ++i) {
    p[i] = static_cast<std::uint8_t>(get_integer(j[i], path + "[" + std::to_string(i) + "]", 0, 255));
  }
  return p;
}

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

void PipelineConfig::validate() const {
  try {
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
      if (profiles[i].category != kAllCategories[i]) {
        fail("categories", "profiles are not ordered by category");
      }
      profiles[i].range.validate();
    }
    cluster.wilt_band.validate();
    contour_filter.validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    throw Error(ErrorCode::ConfigError, e.what());
  }
  if (cluster.k_low < 1 || cluster.k_high < cluster.k_low) {
    fail("cluster.k_range", "expected 1 <= low <= high");
  }
  if (cluster.fixed_k && *cluster.fixed_k < 1) fail("cluster.k", "must be at least 1");
  if (cluster.iterations < 1) fail("cluster.iterations", "must be at least 1");
  if (overlay_thickness < 1) fail("contour.thickness", "must be at least 1");
}

PipelineConfig parse_config(std::string_view text) {
  const Json doc = parse_document(text);
  PipelineConfig cfg;
  expect_object(doc, "", {"categories", "residual_cleanup", "cluster", "wilt_cleanup", "contour", "output"});

  if (doc.contains("categories")) {
    const Json& cats = doc["categories"];
    expect_object(cats, "categories", {"healthy_vegetation", "ground", "packing_material"});
    for (const auto& item : cats.items()) {
      const auto category = parse_category(item.key());
      const std::string path = join("categories", item.key());
      CategoryProfile& profile = cfg.profiles[static_cast<std::size_t>(*category)];
      const Json& p = item.value();
      expect_object(p, path, {"h", "s", "v", "structuring_element", "morphology"});
      Json bounds = Json::object();
      for (const char* key : {"h", "s", "v"}) {
        if (p.contains(key)) bounds[key] = p[key];
      }
      profile.range = parse_range(bounds, path, profile.range);
      if (p.contains("structuring_element")) {
        profile.se = parse_se(p["structuring_element"], join(path, "structuring_element"));
      }
      if (p.contains("morphology")) {
        profile.morph_sequence = parse_sequence(p["morphology"], join(path, "morphology"));
      }
    }
  }
  if (doc.contains("residual_cleanup")) {
    cfg.residual_cleanup = parse_cleanup(doc["residual_cleanup"], "residual_cleanup", cfg.residual_cleanup);
  }
  if (doc.contains("wilt_cleanup")) {
    cfg.wilt_cleanup = parse_cleanup(doc["wilt_cleanup"], "wilt_cleanup", cfg.wilt_cleanup);
  }
  if (doc.contains("cluster")) {
    const Json& c = doc["cluster"];
    expect_object(c, "cluster", {"k_range", "k", "iterations", "seed", "wilt_band"});
    if (c.contains("k_range")) {
      std::tie(cfg.cluster.k_low, cfg.cluster.k_high) =
          get_bounds(c["k_range"], "cluster.k_range", 1, std::numeric_limits<int>::max());
    }
    if (c.contains("k")) {
      if (c["k"].is_null()) {
        cfg.cluster.fixed_k.reset();
      } else {
        cfg.cluster.fixed_k = static_cast<int>(get_integer(c["k"], "cluster.k", 1, std::numeric_limits<int>::max()));
      }
    }
    if (c.contains("iterations")) {
      cfg.cluster.iterations = static_cast<int>(get_integer(c["iterations"], "cluster.iterations", 1, 1'000'000));
    }
    if (c.contains("seed")) cfg.cluster.seed = get_seed(c["seed"], "cluster.seed");
    if (c.contains("wilt_band")) {
      cfg.cluster.wilt_band = parse_range(c["wilt_band"], "cluster.wilt_band", cfg.cluster.wilt_band);
    }
  }
  if (doc.contains("contour")) {
    const Json& c = doc["contour"];
    expect_object(c, "contour", {"min_area", "max_area", "overlay_color", "thickness"});
    constexpr auto kMaxArea = std::numeric_limits<std::int64_t>::max();
    if (c.contains("min_area")) {
      cfg.contour_filter.min_area = static_cast<std::size_t>(get_integer(c["min_area"], "contour.min_area", 1, kMaxArea));
    }
    if (c.contains("max_area")) {
      if (c["max_area"].is_null()) {
        cfg.contour_filter.max_area.reset();
      } else {
        cfg.contour_filter.max_area = static_cast<std::size_t>(get_integer(c["max_area"], "contour.max_area", 1, kMaxArea));
      }
    }
    if (c.contains("overlay_color")) cfg.overlay_color = parse_color(c["overlay_color"], "contour.overlay_color");
    if (c.contains("thickness")) {
      cfg.overlay_thickness = static_cast<int>(get_integer(c["thickness"], "contour.thickness", 1, 1000));
    }
  }
  if (doc.contains("output")) {
    const Json& o = doc["output"];
    expect_object(o, "output", {"masks", "frames", "overlay", "report", "timings"});
    if (o.contains("masks")) cfg.outputs.masks = get_bool(o["masks"], "output.masks");
    if (o.contains("frames")) cfg.outputs.frames = get_bool(o["frames"], "output.frames");
    if (o.contains("overlay")) cfg.outputs.overlay = get_bool(o["overlay"], "output.overlay");
    if (o.contains("report")) cfg.outputs.report = get_bool(o["report"], "output.report");
    if (o.contains("timings")) cfg.outputs.timings = get_bool(o["timings"], "output.timings");
  }
  cfg.validate();
  return cfg;
}

std::string serialize_config(const PipelineConfig& cfg) {
  Json categories = Json::object();
  for (const CategoryProfile& p : cfg.profiles) {
    Json entry = range_to_json(p.range);
    entry["structuring_element"] = se_to_json(p.se);
    entry["morphology"] = sequence_to_json(p.morph_sequence);
    categories[std::string(to_string(p.category))] = entry;
  }
  Json cluster{{"k_range", {cfg.cluster.k_low, cfg.cluster.k_high}},
               {"k", cfg.cluster.fixed_k ? Json(*cfg.cluster.fixed_k) : Json(nullptr)},
               {"iterations", cfg.cluster.iterations},
               {"seed", cfg.cluster.seed},
               {"wilt_band", range_to_json(cfg.cluster.wilt_band)}};
  Json contour{{"min_area", cfg.contour_filter.min_area},
               {"max_area", cfg.contour_filter.max_area ? Json(*cfg.contour_filter.max_area) : Json(nullptr)},
               {"overlay_color", {cfg.overlay_color[0], cfg.overlay_color[1], cfg.overlay_color[2]}},
               {"thickness", cfg.overlay_thickness}};
  Json output{{"masks", cfg.outputs.masks},
              {"frames", cfg.outputs.frames},
              {"overlay", cfg.outputs.overlay},
              {"report", cfg.outputs.report},
              {"timings", cfg.outputs.timings}};
  Json doc{{"categories", categories},
           {"residual_cleanup", cleanup_to_json(cfg.residual_cleanup)},
           {"cluster", cluster},
           {"wilt_cleanup", cleanup_to_json(cfg.wilt_cleanup)},
           {"contour", contour},
           {"output", output}};
  return doc.dump(2) + "\n";
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

SceneSpec parse_scene_spec(std::string_view text) {
  const Json doc = parse_document(text);
  SceneSpec spec = default_scene_spec();
  expect_object(doc, "", {"width", "height", "seed", "palettes", "wilt_palette", "wilt_band",
                          "wilt_blobs", "noise_rate", "layout", "min_blob_area"});
  constexpr int kMaxSide = 1 << 16;
  if (doc.contains("width")) spec.width = static_cast<int>(get_integer(doc["width"], "width", 1, kMaxSide));
  if (doc.contains("height")) spec.height = static_cast<int>(get_integer(doc["height"], "height", 1, kMaxSide));
  if (doc.contains("seed")) spec.seed = get_seed(doc["seed"], "seed");
  if (doc.contains("noise_rate")) {
    spec.noise_rate = get_double(doc["noise_rate"], "noise_rate");
    if (spec.noise_rate < 0.0 || spec.noise_rate > 1.0) fail("noise_rate", "expected a value in [0, 1]");
  }
  if (doc.contains("min_blob_area")) {
    spec.min_blob_area = static_cast<std::size_t>(get_integer(doc["min_blob_area"], "min_blob_area", 1, std::int64_t{1} << 40));
  }
  if (doc.contains("palettes")) {
    const Json& p = doc["palettes"];
    expect_object(p, "palettes", {"healthy_vegetation", "ground", "packing_material"});
    for (const auto& item : p.items()) {
      const auto c = static_cast<std::size_t>(*parse_category(item.key()));
      spec.category_palettes[c] = parse_range(item.value(), join("palettes", item.key()), spec.category_palettes[c]);
    }
  }
  if (doc.contains("wilt_palette")) spec.wilt_palette = parse_range(doc["wilt_palette"], "wilt_palette", spec.wilt_palette);
  if (doc.contains("wilt_band")) spec.wilt_band = parse_range(doc["wilt_band"], "wilt_band", spec.wilt_band);
  if (doc.contains("wilt_blobs")) {
    const Json& blobs = doc["wilt_blobs"];
    if (!blobs.is_array()) fail("wilt_blobs", "expected an array");
    spec.wilt_blobs.clear();
    for (std::size_t i = 0; i < blobs.size(); ++i) {
      const std::string path = "wilt_blobs[" + std::to_string(i) + "]";
      expect_object(blobs[i], path, {"x", "y", "radius"});
      if (!blobs[i].contains("x") || !blobs[i].contains("y") || !blobs[i].contains("radius")) {
        fail(path, "expected x, y and radius");
      }
      spec.wilt_blobs.push_back({{static_cast<int>(get_integer(blobs[i]["x"], path + ".x", 0, kMaxSide)),
                                  static_cast<int>(get_integer(blobs[i]["y"], path + ".y", 0, kMaxSide))},
                                 static_cast<int>(get_integer(blobs[i]["radius"], path + ".radius", 0, kMaxSide))});
    }
  }
  if (doc.contains("layout")) {
    const Json& l = doc["layout"];
    expect_object(l, "layout", {"row_period", "vegetation_height", "packing_every", "packing_offset", "packing_height"});
    auto field = [&](const char* key, int& target) {
      if (l.contains(key)) target = static_cast<int>(get_integer(l[key], join("layout", key), 0, kMaxSide));
    };
    field("row_period", spec.layout.row_period);
    field("vegetation_height", spec.layout.vegetation_height);
    field("packing_every", spec.layout.packing_every);
    field("packing_offset", spec.layout.packing_offset);
    field("packing_height", spec.layout.packing_height);
  }
  return spec;
}

std::string serialize_scene_spec(const SceneSpec& spec) {
  Json palettes = Json::object();
  for (Category c : kAllCategories) {
    palettes[std::string(to_string(c))] = range_to_json(spec.category_palettes[static_cast<std::size_t>(c)]);
  }
  Json blobs = Json::array();
  for (const WiltBlob& b : spec.wilt_blobs) {
    blobs.push_back(Json{{"x", b.center.x}, {"y", b.center.y}, {"radius", b.radius}});
  }
  Json doc{{"width", spec.width},
           {"height", spec.height},
           {"seed", spec.seed},
           {"palettes", palettes},
           {"wilt_palette", range_to_json(spec.wilt_palette)},
           {"wilt_band", range_to_json(spec.wilt_band)},
           {"wilt_blobs", blobs},
           {"noise_rate", spec.noise_rate},
           {"min_blob_area", spec.min_blob_area},
           {"layout", Json{{"row_period", spec.layout.row_period},
                           {"vegetation_height", spec.layout.vegetation_height},
                           {"packing_every", spec.layout.packing_every},
                           {"packing_offset", spec.layout.packing_offset},
                           {"packing_height", spec.layout.packing_height}}}};
  return doc.dump(2) + "\n";
}

std::pair<int, int> parse_k_range(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    throw Error(ErrorCode::ConfigError, "k range must look like lo..hi, got '" + std::string(text) + "'");
  }
  auto parse_int = [&](std::string_view part) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc() || ptr != part.data() + part.size()) {
      throw Error(ErrorCode::ConfigError, "invalid k range bound '" + std::string(part) + "'");
    }
    return value;
  };
  const int lo = parse_int(text.substr(0, dots));
  const int hi = parse_int(text.substr(dots + 2));
  if (lo < 1 || hi < lo) throw Error(ErrorCode::ConfigError, "k range must satisfy 1 <= lo <= hi");
  return {lo, hi};
}

}  // namespace wiltscan
