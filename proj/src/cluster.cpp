#include "wiltscan/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "wiltscan/error.hpp"
#include "wiltscan/random.hpp"

namespace wiltscan {

namespace {

constexpr std::size_t kBlock = 4096;

std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }

std::uint8_t round_scaled(double unit, double scale) noexcept {
  const double v = std::floor(std::clamp(unit, 0.0, 1.0) * scale + 0.5);
  return static_cast<std::uint8_t>(v);
}

std::vector<Centroid> seed_plus_plus(std::span<const PixelSample> samples, int k, Rng& rng) {
  const std::size_t n = samples.size();
  std::vector<Centroid> centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  auto as_centroid = [&](std::size_t i) {
    const auto& f = samples[i].features;
    return Centroid{f[0], f[1], f[2]};
  };

  centroids.push_back(as_centroid(static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(n) - 1))));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(samples[i].features, centroids[0]);

  while (centroids.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double running = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        running += d2[i];
        if (running > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      // Fewer distinct points than clusters; duplicates are unavoidable.
      pick = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(n) - 1));
    }
    centroids.push_back(as_centroid(pick));
    const Centroid& c = centroids.back();
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(samples[i].features, c));
    }
  }
  return centroids;
}

// Recomputes centroids as label means. Partial sums are formed per fixed block
// and folded in block order.
std::vector<std::size_t> update_centroids(std::span<const PixelSample> samples,
                                          std::span<const int> labels,
                                          std::vector<Centroid>& centroids) {
  const std::size_t k = centroids.size();
  const std::size_t blocks = block_count(samples.size());
  std::vector<double> sums(blocks * k * 3, 0.0);
  std::vector<std::size_t> tallies(blocks * k, 0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    double* s = sums.data() + static_cast<std::size_t>(b) * k * 3;
    std::size_t* t = tallies.data() + static_cast<std::size_t>(b) * k;
    const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
    const std::size_t end = std::min(samples.size(), begin + kBlock);
    for (std::size_t i = begin; i < end; ++i) {
      const auto c = static_cast<std::size_t>(labels[i]);
      const auto& f = samples[i].features;
      s[c * 3] += f[0];
      s[c * 3 + 1] += f[1];
      s[c * 3 + 2] += f[2];
      ++t[c];
    }
  }

  std::vector<std::size_t> counts(k, 0);
  std::vector<double> total(k * 3, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t c = 0; c < k; ++c) {
      counts[c] += tallies[b * k + c];
      for (std::size_t d = 0; d < 3; ++d) total[c * 3 + d] += sums[(b * k + c) * 3 + d];
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    const auto inv = static_cast<double>(counts[c]);
    centroids[c] = {total[c * 3] / inv, total[c * 3 + 1] / inv, total[c * 3 + 2] / inv};
  }
  return counts;
}

void repair_empty_clusters(std::span<const PixelSample> samples, std::span<const int> labels,
                           const std::vector<std::size_t>& counts,
                           std::vector<Centroid>& centroids) {
  std::vector<std::uint8_t> taken;
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    if (counts[c] != 0) continue;
    if (taken.empty()) taken.assign(samples.size(), 0);
    double worst = -1.0;
    std::size_t pick = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (taken[i]) continue;
      const double d = squared_distance(samples[i].features,
                                        centroids[static_cast<std::size_t>(labels[i])]);
      if (d > worst) {
        worst = d;
        pick = i;
      }
    }
    taken[pick] = 1;
    const auto& f = samples[pick].features;
    centroids[c] = {f[0], f[1], f[2]};
  }
}

}  // namespace

std::vector<PixelSample> collect_samples(const RasterImage& hsv, const BinaryMask& residual) {
  if (hsv.width() != residual.width() || hsv.height() != residual.height()) {
    throw Error(ErrorCode::DimensionMismatch, "residual mask does not match image dimensions");
  }
  if (hsv.colorspace() != Colorspace::HSV) {
    throw Error(ErrorCode::InvalidColorspace, "collect_samples expects an HSV image");
  }
  std::vector<PixelSample> out;
  out.reserve(residual.count());
  const auto data = hsv.data();
  const int w = hsv.width();
  for (std::size_t i = 0; i < residual.size(); ++i) {
    if (!residual[i]) continue;
    const Point p{static_cast<int>(i % static_cast<std::size_t>(w)),
                  static_cast<int>(i / static_cast<std::size_t>(w))};
    out.push_back({p, normalize_hsv_pixel({data[3 * i], data[3 * i + 1], data[3 * i + 2]})});
  }
  return out;
}

double squared_distance(const HsvFeature& f, const Centroid& c) noexcept {
  const double d0 = static_cast<double>(f[0]) - c[0];
  const double d1 = static_cast<double>(f[1]) - c[1];
  const double d2 = static_cast<double>(f[2]) - c[2];
  return d0 * d0 + d1 * d1 + d2 * d2;
}

AssignmentStats assign_labels(std::span<const PixelSample> samples,
                              std::span<const Centroid> centroids, std::span<int> labels) {
  const std::size_t blocks = block_count(samples.size());
  std::vector<double> block_inertia(blocks, 0.0);
  std::vector<std::size_t> block_changed(blocks, 0);
  const std::size_t k = centroids.size();
  const auto nb = static_cast<std::ptrdiff_t>(blocks);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
    const std::size_t end = std::min(samples.size(), begin + kBlock);
    double inertia = 0.0;
    std::size_t changed = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const auto& f = samples[i].features;
      int best = 0;
      double best_d = squared_distance(f, centroids[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = squared_distance(f, centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        ++changed;
      }
      inertia += best_d;
    }
    block_inertia[static_cast<std::size_t>(b)] = inertia;
    block_changed[static_cast<std::size_t>(b)] = changed;
  }

  AssignmentStats stats;
  for (std::size_t b = 0; b < blocks; ++b) {
    stats.inertia += block_inertia[b];
    stats.changed += block_changed[b];
  }
  return stats;
}

ClusterModel kmeans(std::span<const PixelSample> samples, const KMeansParams& params) {
  if (samples.empty()) throw Error(ErrorCode::EmptyInput, "k-means needs at least one sample");
  if (params.k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  if (static_cast<std::size_t>(params.k) > samples.size()) {
    throw Error(ErrorCode::KExceedsSamples, "k = " + std::to_string(params.k) + " exceeds " +
                                                std::to_string(samples.size()) + " samples");
  }
  if (params.iterations < 1) {
    throw Error(ErrorCode::InvalidArgument, "k-means needs at least one iteration");
  }

  Rng rng(params.seed);
  ClusterModel model;
  model.k = params.k;
  model.centroids = seed_plus_plus(samples, params.k, rng);
  // -1 forces every sample to count as changed on the first pass.
  model.labels.assign(samples.size(), -1);

  AssignmentStats stats = assign_labels(samples, model.centroids, model.labels);
  model.inertia_history.push_back(stats.inertia);
  for (int it = 0; it < params.iterations; ++it) {
    const auto counts = update_centroids(samples, model.labels, model.centroids);
    repair_empty_clusters(samples, model.labels, counts, model.centroids);
    stats = assign_labels(samples, model.centroids, model.labels);
    model.inertia_history.push_back(stats.inertia);
    model.iterations_run = it + 1;
    if (stats.changed == 0) break;
  }

  model.inertia = stats.inertia;
  model.counts.assign(static_cast<std::size_t>(params.k), 0);
  for (int label : model.labels) ++model.counts[static_cast<std::size_t>(label)];
  return model;
}

Pixel centroid_to_hsv(const Centroid& c) noexcept {
  return {round_scaled(c[0], 179.0), round_scaled(c[1], 255.0), round_scaled(c[2], 255.0)};
}

std::vector<std::size_t> clusters_in_band(const ClusterModel& model, const HsvRange& wilt_band) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < model.centroids.size(); ++c) {
    if (wilt_band.contains(centroid_to_hsv(model.centroids[c]))) out.push_back(c);
  }
  return out;
}

std::size_t select_wilt_cluster(const ClusterModel& model, const HsvRange& wilt_band) {
  wilt_band.validate();
  if (model.centroids.empty()) {
    throw Error(ErrorCode::EmptyInput, "cluster model has no centroids");
  }
  const auto inside = clusters_in_band(model, wilt_band);
  if (!inside.empty()) {
    std::size_t best = inside.front();
    for (std::size_t c : inside) {
      if (model.counts[c] > model.counts[best]) best = c;
    }
    return best;
  }
  const double mid = (static_cast<double>(wilt_band.h_low) + wilt_band.h_high) / 2.0;
  std::size_t best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < model.centroids.size(); ++c) {
    const double gap = std::abs(model.centroids[c][0] * 179.0 - mid);
    if (gap < best_gap) {
      best_gap = gap;
      best = c;
    }
  }
  return best;
}

std::vector<BinaryMask> cluster_frames(const ClusterModel& model,
                                       std::span<const PixelSample> samples, int width,
                                       int height) {
  if (model.labels.size() != samples.size()) {
    throw Error(ErrorCode::DimensionMismatch, "cluster labels do not align with samples");
  }
  std::vector<BinaryMask> frames(static_cast<std::size_t>(model.k), BinaryMask(width, height));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    frames[static_cast<std::size_t>(model.labels[i])].set(samples[i].position.x,
                                                          samples[i].position.y, true);
  }
  return frames;
}

int choose_elbow_k(std::span<const int> k_values, std::span<const std::size_t> counts) {
  if (k_values.empty()) throw Error(ErrorCode::EmptyInput, "elbow selection needs at least one k");
  if (k_values.size() != counts.size()) {
    throw Error(ErrorCode::DimensionMismatch, "elbow counts do not align with k values");
  }
  int chosen = k_values.front();
  // Best ratio held as drop / prev; compared by cross-multiplication so equal
  // ratios tie exactly.
  unsigned __int128 best_drop = 0;
  unsigned __int128 best_prev = 1;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    const std::size_t prev = counts[i - 1];
    if (prev == 0 || counts[i] >= prev) continue;
    const unsigned __int128 drop = prev - counts[i];
    if (drop * best_prev > best_drop * static_cast<unsigned __int128>(prev)) {
      best_drop = drop;
      best_prev = prev;
      chosen = k_values[i];
    }
  }
  return chosen;
}

std::uint64_t seed_for_k(std::uint64_t seed, int k) noexcept {
  return derive_seed(seed, static_cast<std::uint64_t>(k));
}

ElbowScan elbow_scan(std::span<const PixelSample> samples, const ElbowParams& params) {
  if (samples.empty()) throw Error(ErrorCode::EmptyInput, "elbow scan needs at least one sample");
  if (params.k_values.empty()) throw Error(ErrorCode::EmptyInput, "elbow scan needs k values");
  if (!std::is_sorted(params.k_values.begin(), params.k_values.end()) ||
      std::adjacent_find(params.k_values.begin(), params.k_values.end()) !=
          params.k_values.end()) {
    throw Error(ErrorCode::InvalidArgument, "elbow k values must be strictly ascending");
  }
  ElbowScan scan;
  scan.k_values = params.k_values;
  scan.wilt_pixel_counts.reserve(params.k_values.size());
  for (int k : params.k_values) {
    const ClusterModel model = kmeans(samples, {k, params.iterations, seed_for_k(params.seed, k)});
    scan.wilt_pixel_counts.push_back(model.counts[select_wilt_cluster(model, params.wilt_band)]);
  }
  scan.chosen_k = choose_elbow_k(scan.k_values, scan.wilt_pixel_counts);
  return scan;
}

}  // namespace wiltscan
