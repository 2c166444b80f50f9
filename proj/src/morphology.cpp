#include "wiltscan/morphology.hpp"

#include <algorithm>
#include <cstddef>

#include "wiltscan/error.hpp"

namespace wiltscan {

StructuringElement::StructuringElement(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width < 1 || height < 1 || width % 2 == 0 || height % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument, "structuring element sides must be odd and positive, got " +
                                                std::to_string(width) + "x" +
                                                std::to_string(height));
  }
  if (bits_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::DimensionMismatch, "structuring element cell count does not match its size");
  }
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
  if (std::none_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; })) {
    throw Error(ErrorCode::InvalidArgument, "structuring element has no set cells");
  }
}

StructuringElement StructuringElement::square(int size) {
  return StructuringElement(size, size,
                            std::vector<std::uint8_t>(static_cast<std::size_t>(size) * size, 1));
}

StructuringElement StructuringElement::cross(int size) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(size) * size, 0);
  const int c = size / 2;
  for (int i = 0; i < size; ++i) {
    bits[static_cast<std::size_t>(c) * size + i] = 1;
    bits[static_cast<std::size_t>(i) * size + c] = 1;
  }
  return StructuringElement(size, size, std::move(bits));
}

StructuringElement StructuringElement::disk(int size) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(size) * size, 0);
  const int c = size / 2;
  // Radius c + 0.5 keeps the 3x3 disk a full square and rounds larger ones.
  const int limit = c * c + c;
  for (int j = 0; j < size; ++j) {
    for (int i = 0; i < size; ++i) {
      const int dx = i - c;
      const int dy = j - c;
      bits[static_cast<std::size_t>(j) * size + i] = dx * dx + dy * dy <= limit ? 1 : 0;
    }
  }
  return StructuringElement(size, size, std::move(bits));
}

StructuringElement StructuringElement::from_rows(std::span<const std::string> rows) {
  if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "structuring element has no rows");
  const auto width = rows.front().size();
  std::vector<std::uint8_t> bits;
  bits.reserve(width * rows.size());
  for (const auto& row : rows) {
    if (row.size() != width) {
      throw Error(ErrorCode::InvalidArgument, "structuring element rows differ in length");
    }
    for (char ch : row) {
      if (ch == '1' || ch == '#') {
        bits.push_back(1);
      } else if (ch == '0' || ch == '.') {
        bits.push_back(0);
      } else {
        throw Error(ErrorCode::InvalidArgument,
                    std::string("invalid structuring element cell '") + ch + "'");
      }
    }
  }
  return StructuringElement(static_cast<int>(width), static_cast<int>(rows.size()),
                            std::move(bits));
}

std::vector<Point> StructuringElement::offsets() const {
  std::vector<Point> out;
  for (int j = 0; j < height_; ++j) {
    for (int i = 0; i < width_; ++i) {
      if (at(i, j)) out.push_back({i - origin_x(), j - origin_y()});
    }
  }
  return out;
}

std::vector<std::string> StructuringElement::rows() const {
  std::vector<std::string> out(static_cast<std::size_t>(height_));
  for (int j = 0; j < height_; ++j) {
    for (int i = 0; i < width_; ++i) out[j].push_back(at(i, j) ? '1' : '0');
  }
  return out;
}

std::string_view to_string(MorphOp op) noexcept {
  switch (op) {
    case MorphOp::Open: return "open";
    case MorphOp::Close: return "close";
    case MorphOp::Erode: return "erode";
    case MorphOp::Dilate: return "dilate";
  }
  return "?";
}

MorphOp parse_morph_op(std::string_view name) {
  if (name == "open") return MorphOp::Open;
  if (name == "close") return MorphOp::Close;
  if (name == "erode") return MorphOp::Erode;
  if (name == "dilate") return MorphOp::Dilate;
  throw Error(ErrorCode::InvalidArgument, "unknown morphological operation '" + std::string(name) + "'");
}

namespace {

// Each offset contributes one shifted copy of a source row; rows are
// independent so the outer loop parallelizes without coordination.
template <bool Erode>
BinaryMask shift_combine(const BinaryMask& mask, const StructuringElement& se) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<Point> offsets = se.offsets();
  if constexpr (!Erode) {
    for (auto& o : offsets) o = {-o.x, -o.y};
  }
  BinaryMask out(w, h, Erode);
  const std::uint8_t* src = mask.bits().data();
  std::uint8_t* dst = out.bits().data();

#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    std::uint8_t* out_row = dst + static_cast<std::size_t>(y) * w;
    for (const Point& o : offsets) {
      const int sy = y + o.y;
      if (sy < 0 || sy >= h) continue;
      const std::uint8_t* in_row = src + static_cast<std::size_t>(sy) * w;
      const int x_begin = std::max(0, -o.x);
      const int x_end = std::min(w, w - o.x);
      for (int x = x_begin; x < x_end; ++x) {
        if constexpr (Erode) {
          out_row[x] &= in_row[x + o.x];
        } else {
          out_row[x] |= in_row[x + o.x];
        }
      }
    }
  }
  return out;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) {
  return shift_combine<true>(mask, se);
}

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) {
  return shift_combine<false>(mask, se);
}

BinaryMask open(const BinaryMask& mask, const StructuringElement& se) {
  return dilate(erode(mask, se), se);
}

BinaryMask close(const BinaryMask& mask, const StructuringElement& se) {
  return erode(dilate(mask, se), se);
}

BinaryMask apply_morphology(const BinaryMask& mask, const StructuringElement& se,
                            std::span<const MorphOp> sequence) {
  BinaryMask out = mask;
  for (MorphOp op : sequence) {
    switch (op) {
      case MorphOp::Open: out = open(out, se); break;
      case MorphOp::Close: out = close(out, se); break;
      case MorphOp::Erode: out = erode(out, se); break;
      case MorphOp::Dilate: out = dilate(out, se); break;
    }
  }
  return out;
}

}  // namespace wiltscan
