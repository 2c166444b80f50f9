#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wiltscan/image.hpp"

namespace wiltscan {

// Odd-sized boolean kernel whose origin is the center cell.
class StructuringElement {
 public:
  StructuringElement(int width, int height, std::vector<std::uint8_t> bits);

  static StructuringElement square(int size);
  static StructuringElement cross(int size);
  // Cells whose center lies within the inscribed circle.
  static StructuringElement disk(int size);
  // One string per row, '1' or '#' for set cells, '0' or '.' for clear ones.
  static StructuringElement from_rows(std::span<const std::string> rows);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int origin_x() const noexcept { return width_ / 2; }
  int origin_y() const noexcept { return height_ / 2; }
  bool at(int i, int j) const noexcept { return bits_[static_cast<std::size_t>(j) * width_ + i] != 0; }

  // Offsets (i - cx, j - cy) of the set cells in row-major order.
  std::vector<Point> offsets() const;
  std::vector<std::string> rows() const;

  friend bool operator==(const StructuringElement&, const StructuringElement&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

enum class MorphOp { Open, Close, Erode, Dilate };

std::string_view to_string(MorphOp op) noexcept;
MorphOp parse_morph_op(std::string_view name);

// out(p) is set iff p + b is set for every offset b of the element. Neighbors
// outside the grid do not constrain the result.
BinaryMask erode(const BinaryMask& mask, const StructuringElement& se);

// out(p) is set iff p - b is set for some offset b of the element. Neighbors
// outside the grid are clear.
BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);

BinaryMask open(const BinaryMask& mask, const StructuringElement& se);
BinaryMask close(const BinaryMask& mask, const StructuringElement& se);

BinaryMask apply_morphology(const BinaryMask& mask, const StructuringElement& se,
                            std::span<const MorphOp> sequence);

}  // namespace wiltscan
