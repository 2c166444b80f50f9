#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wiltscan {

enum class Colorspace { RGB, HSV };

// Three 8-bit channels. For HSV images channel 0 is hue on the 0-179 scale.
using Pixel = std::array<std::uint8_t, 3>;

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

// Row-major, top-left origin, y grows downward.
class RasterImage {
 public:
  RasterImage(int width, int height, Colorspace colorspace);
  RasterImage(int width, int height, Colorspace colorspace, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Colorspace colorspace() const noexcept { return colorspace_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  // Bounds-checked; throws Error(OutOfBounds).
  Pixel at(int x, int y) const;
  void set(int x, int y, const Pixel& value);

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t offset(int x, int y) const;

  int width_;
  int height_;
  Colorspace colorspace_;
  std::vector<std::uint8_t> data_;
};

// Row-major grid of booleans stored one byte per cell (0 or 1).
class BinaryMask {
 public:
  BinaryMask(int width, int height, bool fill = false);
  BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  bool at(int x, int y) const;
  void set(int x, int y, bool value);

  // Unchecked flat access for kernels.
  bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }

  std::size_t count() const noexcept;

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::span<std::uint8_t> bits() noexcept { return bits_; }

  bool same_shape(const BinaryMask& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  BinaryMask complement() const;
  BinaryMask operator|(const BinaryMask& other) const;
  BinaryMask operator&(const BinaryMask& other) const;
  // True when every set bit of *this is also set in other.
  bool subset_of(const BinaryMask& other) const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

// true -> (255,255,255), false -> (0,0,0).
RasterImage mask_to_image(const BinaryMask& mask);

}  // namespace wiltscan
