#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wiltscan/colorspace.hpp"
#include "wiltscan/image.hpp"
#include "wiltscan/segmentation.hpp"

namespace wiltscan {

struct PixelSample {
  Point position;
  HsvFeature features;  // normalized h, s, v in [0,1]
};

using Centroid = std::array<double, 3>;

struct ClusterModel {
  int k = 0;
  std::vector<Centroid> centroids;
  std::vector<int> labels;           // one per sample
  std::vector<std::size_t> counts;   // one per cluster
  double inertia = 0.0;              // squared distances to assigned centroids
  std::vector<double> inertia_history;  // after the seeding pass and every update
  int iterations_run = 0;
};

struct KMeansParams {
  int k = 2;
  int iterations = 20;
  std::uint64_t seed = 0;
};

// One sample per set residual bit in row-major order.
std::vector<PixelSample> collect_samples(const RasterImage& hsv, const BinaryMask& residual);

// Euclidean distance over the three normalized channels, squared.
double squared_distance(const HsvFeature& f, const Centroid& c) noexcept;

struct AssignmentStats {
  std::size_t changed = 0;
  double inertia = 0.0;
};

// Nearest-centroid labelling (lowest index wins ties). Updates labels in place
// and reports how many changed. Parallel over samples; the inertia sum is
// reduced in fixed-size blocks so the result does not depend on thread count.
AssignmentStats assign_labels(std::span<const PixelSample> samples,
                              std::span<const Centroid> centroids, std::span<int> labels);

// k-means++ seeding followed by up to params.iterations Lloyd updates, stopping
// early once no label changes. Empty clusters are moved onto the sample lying
// farthest from its own centroid.
ClusterModel kmeans(std::span<const PixelSample> samples, const KMeansParams& params);

// Centroid scaled back to the integer HSV lattice (half-up rounding).
Pixel centroid_to_hsv(const Centroid& c) noexcept;

// Largest cluster whose centroid lies in the band; if none does, the cluster
// whose centroid hue is closest to the band's hue midpoint. Ties go to the
// lower index.
std::size_t select_wilt_cluster(const ClusterModel& model, const HsvRange& wilt_band);

// Every cluster whose centroid lies inside the band, ascending.
std::vector<std::size_t> clusters_in_band(const ClusterModel& model, const HsvRange& wilt_band);

// Mask i marks the positions of samples labelled i.
std::vector<BinaryMask> cluster_frames(const ClusterModel& model,
                                       std::span<const PixelSample> samples, int width,
                                       int height);

struct ElbowScan {
  std::vector<int> k_values;
  std::vector<std::size_t> wilt_pixel_counts;
  int chosen_k = 0;
};

// Picks the k with the largest relative drop (prev - cur) / prev between
// consecutive entries. Increases score zero, ties take the smaller k, and a
// sequence with no drop at all returns the first k.
int choose_elbow_k(std::span<const int> k_values, std::span<const std::size_t> counts);

// Seed used for the run at a given k; each k gets its own stream.
std::uint64_t seed_for_k(std::uint64_t seed, int k) noexcept;

struct ElbowParams {
  std::vector<int> k_values;  // ascending
  int iterations = 20;
  std::uint64_t seed = 0;
  HsvRange wilt_band;
};

ElbowScan elbow_scan(std::span<const PixelSample> samples, const ElbowParams& params);

}  // namespace wiltscan
