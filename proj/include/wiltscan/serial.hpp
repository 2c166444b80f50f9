#pragma once

// Single-threaded reference versions of the data-parallel kernels. They follow
// the per-element definitions directly and exist so tests and benchmarks can
// compare the OpenMP kernels against them.

#include <span>

#include "wiltscan/cluster.hpp"
#include "wiltscan/image.hpp"
#include "wiltscan/morphology.hpp"
#include "wiltscan/segmentation.hpp"

namespace wiltscan::serial {

RasterImage rgb_to_hsv_image(const RasterImage& img);
BinaryMask threshold_mask(const RasterImage& hsv, const HsvRange& range);
BinaryMask erode(const BinaryMask& mask, const StructuringElement& se);
BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);
AssignmentStats assign_labels(std::span<const PixelSample> samples,
                              std::span<const Centroid> centroids, std::span<int> labels);

}  // namespace wiltscan::serial
