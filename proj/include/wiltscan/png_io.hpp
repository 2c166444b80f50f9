#pragma once

#include <filesystem>

#include "wiltscan/image.hpp"

namespace wiltscan {

// Reads an 8-bit RGB or RGBA PNG. Alpha is dropped. Grayscale, palette and
// 16-bit files raise UnsupportedFormat.
RasterImage load_image(const std::filesystem::path& path);

// Writes a lossless 8-bit RGB PNG. Output bytes depend only on the pixels.
void save_image(const RasterImage& img, const std::filesystem::path& path);

void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

}  // namespace wiltscan
