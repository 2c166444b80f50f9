#include "wiltscan/image.hpp"

#include <algorithm>
#include <string>

#include "wiltscan/error.hpp"

namespace wiltscan {

namespace {

void check_dimensions(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "image dimensions must be positive, got " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
}

std::string coord_string(int x, int y) {
  return "(" + std::to_string(x) + ", " + std::to_string(y) + ")";
}

}  // namespace

RasterImage::RasterImage(int width, int height, Colorspace colorspace)
    : width_(width), height_(height), colorspace_(colorspace) {
  check_dimensions(width, height);
  data_.assign(pixel_count() * 3, 0);
}

RasterImage::RasterImage(int width, int height, Colorspace colorspace,
                         std::vector<std::uint8_t> data)
    : width_(width), height_(height), colorspace_(colorspace), data_(std::move(data)) {
  check_dimensions(width, height);
  if (data_.size() != pixel_count() * 3) {
    throw Error(ErrorCode::DimensionMismatch,
                "pixel buffer holds " + std::to_string(data_.size()) + " bytes, expected " +
                    std::to_string(pixel_count() * 3));
  }
  if (colorspace_ == Colorspace::HSV) {
    for (std::size_t i = 0; i < data_.size(); i += 3) {
      if (data_[i] > 179) {
        throw Error(ErrorCode::InvalidArgument,
                    "hue " + std::to_string(data_[i]) + " exceeds 179 at pixel " +
                        std::to_string(i / 3));
      }
    }
  }
}

std::size_t RasterImage::offset(int x, int y) const {
  if (!contains(x, y)) {
    throw Error(ErrorCode::OutOfBounds, "pixel " + coord_string(x, y) + " outside " +
                                            std::to_string(width_) + "x" +
                                            std::to_string(height_) + " image");
  }
  return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
          static_cast<std::size_t>(x)) *
         3;
}

Pixel RasterImage::at(int x, int y) const {
  const std::size_t o = offset(x, y);
  return {data_[o], data_[o + 1], data_[o + 2]};
}

void RasterImage::set(int x, int y, const Pixel& value) {
  const std::size_t o = offset(x, y);
  if (colorspace_ == Colorspace::HSV && value[0] > 179) {
    throw Error(ErrorCode::InvalidArgument, "hue " + std::to_string(value[0]) + " exceeds 179");
  }
  std::copy(value.begin(), value.end(), data_.begin() + static_cast<std::ptrdiff_t>(o));
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
  check_dimensions(width, height);
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
               fill ? 1 : 0);
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dimensions(width, height);
  if (bits_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::DimensionMismatch,
                "mask buffer holds " + std::to_string(bits_.size()) + " cells, expected " +
                    std::to_string(static_cast<std::size_t>(width) * height));
  }
  // Non-zero means set, as with an 8-bit single-channel mask.
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

bool BinaryMask::at(int x, int y) const {
  if (!contains(x, y)) {
    throw Error(ErrorCode::OutOfBounds, "mask cell " + coord_string(x, y) + " out of range");
  }
  return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
}

void BinaryMask::set(int x, int y, bool value) {
  if (!contains(x, y)) {
    throw Error(ErrorCode::OutOfBounds, "mask cell " + coord_string(x, y) + " out of range");
  }
  bits_[static_cast<std::size_t>(y) * width_ + x] = value ? 1 : 0;
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryMask BinaryMask::complement() const {
  BinaryMask out(width_, height_);
  std::transform(bits_.begin(), bits_.end(), out.bits_.begin(),
                 [](std::uint8_t b) -> std::uint8_t { return b ^ 1U; });
  return out;
}

BinaryMask BinaryMask::operator|(const BinaryMask& other) const {
  if (!same_shape(other)) throw Error(ErrorCode::DimensionMismatch, "mask union shape mismatch");
  BinaryMask out(width_, height_);
  std::transform(bits_.begin(), bits_.end(), other.bits_.begin(), out.bits_.begin(),
                 [](std::uint8_t a, std::uint8_t b) -> std::uint8_t { return a | b; });
  return out;
}

BinaryMask BinaryMask::operator&(const BinaryMask& other) const {
  if (!same_shape(other)) {
    throw Error(ErrorCode::DimensionMismatch, "mask intersection shape mismatch");
  }
  BinaryMask out(width_, height_);
  std::transform(bits_.begin(), bits_.end(), other.bits_.begin(), out.bits_.begin(),
                 [](std::uint8_t a, std::uint8_t b) -> std::uint8_t { return a & b; });
  return out;
}

bool BinaryMask::subset_of(const BinaryMask& other) const {
  if (!same_shape(other)) throw Error(ErrorCode::DimensionMismatch, "mask subset shape mismatch");
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

RasterImage mask_to_image(const BinaryMask& mask) {
  RasterImage out(mask.width(), mask.height(), Colorspace::RGB);
  auto dst = out.data();
  const auto src = mask.bits();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const std::uint8_t v = src[i] ? 255 : 0;
    dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = v;
  }
  return out;
}

}  // namespace wiltscan
