// Serial reference kernels against the OpenMP ones on a 1024x768 scene.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "wiltscan/cluster.hpp"
#include "wiltscan/colorspace.hpp"
#include "wiltscan/morphology.hpp"
#include "wiltscan/pipeline.hpp"
#include "wiltscan/segmentation.hpp"
#include "wiltscan/serial.hpp"
#include "wiltscan/synthgen.hpp"

using namespace wiltscan;

namespace {

struct Fixture {
  RasterImage rgb;
  RasterImage hsv;
  BinaryMask mask;
  std::vector<PixelSample> samples;
  std::vector<Centroid> centroids;

  Fixture() : rgb(1, 1, Colorspace::RGB), hsv(1, 1, Colorspace::HSV), mask(1, 1) {
    SceneSpec spec = default_scene_spec();
    spec.seed = 11;
    spec.wilt_blobs = place_blobs(spec, 5, 12);
    rgb = generate_scene(spec).image;
    hsv = rgb_to_hsv_image(rgb);
    mask = threshold_mask(hsv, default_range(Category::HealthyVegetation));
    samples = collect_samples(hsv, mask);
    const ClusterModel m = kmeans(samples, {8, 1, 3});
    centroids = m.centroids;
  }
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

const StructuringElement kSquare5 = StructuringElement::square(5);

void BM_hsv_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(serial::rgb_to_hsv_image(fx().rgb));
}
void BM_hsv_omp(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(rgb_to_hsv_image(fx().rgb));
}

void BM_threshold_serial(benchmark::State& st) {
  const HsvRange r = default_range(Category::Ground);
  for (auto _ : st) benchmark::DoNotOptimize(serial::threshold_mask(fx().hsv, r));
}
void BM_threshold_omp(benchmark::State& st) {
  const HsvRange r = default_range(Category::Ground);
  for (auto _ : st) benchmark::DoNotOptimize(threshold_mask(fx().hsv, r));
}

void BM_erode_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(serial::erode(fx().mask, kSquare5));
}
void BM_erode_omp(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(erode(fx().mask, kSquare5));
}
void BM_dilate_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(serial::dilate(fx().mask, kSquare5));
}
void BM_dilate_omp(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(dilate(fx().mask, kSquare5));
}

void BM_assign_serial(benchmark::State& st) {
  std::vector<int> labels(fx().samples.size(), -1);
  for (auto _ : st) {
    benchmark::DoNotOptimize(serial::assign_labels(fx().samples, fx().centroids, labels));
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(fx().samples.size()));
}
void BM_assign_omp(benchmark::State& st) {
  std::vector<int> labels(fx().samples.size(), -1);
  for (auto _ : st) benchmark::DoNotOptimize(assign_labels(fx().samples, fx().centroids, labels));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(fx().samples.size()));
}

void BM_pipeline(benchmark::State& st) {
  const PipelineConfig cfg;
  for (auto _ : st) benchmark::DoNotOptimize(run_pipeline(fx().rgb, cfg));
}

}  // namespace

BENCHMARK(BM_hsv_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_hsv_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_threshold_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_threshold_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_erode_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_erode_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dilate_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dilate_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_assign_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_assign_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pipeline)->Unit(benchmark::kMillisecond)->Iterations(3);

BENCHMARK_MAIN();
