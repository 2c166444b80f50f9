#pragma once

#include <filesystem>
#include <random>
#include <string>

#include <vector>

#include "wiltscan/cluster.hpp"
#include "wiltscan/image.hpp"

namespace testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

wiltscan::RasterImage random_rgb(std::mt19937_64& rng, int w, int h);

// Writes a PNG with an arbitrary color type and depth via libpng.
void write_raw_png(const std::filesystem::path& path, int w, int h, int bit_depth,
                   int color_type, int channels);

// n points in the unit cube, pairwise at least min_gap apart.
std::vector<wiltscan::Centroid> separated_centers(std::mt19937_64& rng, int n, double min_gap);

// per_center gaussian samples around each center; positions are sequential.
std::vector<wiltscan::PixelSample> gaussian_blobs(std::mt19937_64& rng,
                                                  const std::vector<wiltscan::Centroid>& centers,
                                                  int per_center, double sigma);

// Smallest achievable worst-case distance over one-to-one matchings.
double matched_max_distance(const std::vector<wiltscan::Centroid>& found,
                            const std::vector<wiltscan::Centroid>& truth);

}  // namespace testing
