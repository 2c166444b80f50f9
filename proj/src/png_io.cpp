#include "wiltscan/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "wiltscan/error.hpp"

namespace wiltscan {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports errors through longjmp; the message is kept for the exception.
struct PngErrorState {
  std::string message;
};

void on_png_error(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngErrorState*>(png_get_error_ptr(png));
  if (state != nullptr) state->message = msg;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

class PngReader {
 public:
  PngReader() {
    png_ = png_create_read_struct(PNG_LIBPNG_VER_STRING, &errors_, on_png_error, on_png_warning);
    if (png_ != nullptr) info_ = png_create_info_struct(png_);
    if (png_ == nullptr || info_ == nullptr) {
      throw Error(ErrorCode::IoError, "libpng read structures could not be allocated");
    }
  }
  ~PngReader() { png_destroy_read_struct(&png_, &info_, nullptr); }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;

  png_structp png() const { return png_; }
  png_infop info() const { return info_; }
  const std::string& message() const { return errors_.message; }

 private:
  PngErrorState errors_;
  png_structp png_ = nullptr;
  png_infop info_ = nullptr;
};

class PngWriter {
 public:
  PngWriter() {
    png_ = png_create_write_struct(PNG_LIBPNG_VER_STRING, &errors_, on_png_error, on_png_warning);
    if (png_ != nullptr) info_ = png_create_info_struct(png_);
    if (png_ == nullptr || info_ == nullptr) {
      throw Error(ErrorCode::IoError, "libpng write structures could not be allocated");
    }
  }
  ~PngWriter() { png_destroy_write_struct(&png_, &info_); }
  PngWriter(const PngWriter&) = delete;
  PngWriter& operator=(const PngWriter&) = delete;

  png_structp png() const { return png_; }
  png_infop info() const { return info_; }
  const std::string& message() const { return errors_.message; }

 private:
  PngErrorState errors_;
  png_structp png_ = nullptr;
  png_infop info_ = nullptr;
};

// Kept free of C++ objects with destructors between setjmp and longjmp.
bool read_rows(PngReader& reader, std::FILE* file, png_uint_32& width, png_uint_32& height,
               int& bit_depth, int& color_type, std::vector<png_byte>& buffer,
               std::vector<png_bytep>& rows, bool& unsupported) {
  if (setjmp(png_jmpbuf(reader.png()))) return false;
  png_init_io(reader.png(), file);
  png_set_sig_bytes(reader.png(), 8);
  png_read_info(reader.png(), reader.info());
  png_get_IHDR(reader.png(), reader.info(), &width, &height, &bit_depth, &color_type, nullptr,
               nullptr, nullptr);
  if (bit_depth != 8 ||
      (color_type != PNG_COLOR_TYPE_RGB && color_type != PNG_COLOR_TYPE_RGB_ALPHA)) {
    unsupported = true;
    return true;
  }
  const std::size_t rowbytes = png_get_rowbytes(reader.png(), reader.info());
  buffer.resize(rowbytes * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = buffer.data() + y * rowbytes;
  png_read_image(reader.png(), rows.data());
  png_read_end(reader.png(), nullptr);
  return true;
}

bool write_rows(PngWriter& writer, std::FILE* file, png_uint_32 width, png_uint_32 height,
                std::vector<png_bytep>& rows) {
  if (setjmp(png_jmpbuf(writer.png()))) return false;
  png_init_io(writer.png(), file);
  png_set_IHDR(writer.png(), writer.info(), width, height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(writer.png(), 6);
  png_write_info(writer.png(), writer.info());
  png_write_image(writer.png(), rows.data());
  png_write_end(writer.png(), nullptr);
  return true;
}

}  // namespace

RasterImage load_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, "no such image file: " + path.string());
  }
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(ErrorCode::IoError, "cannot open " + path.string());

  png_byte signature[8] = {};
  if (std::fread(signature, 1, sizeof signature, file.get()) != sizeof signature ||
      png_sig_cmp(signature, 0, sizeof signature) != 0) {
    throw Error(ErrorCode::UnsupportedFormat, path.string() + " is not a PNG file");
  }

  PngReader reader;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  bool unsupported = false;
  std::vector<png_byte> buffer;
  std::vector<png_bytep> rows;
  if (!read_rows(reader, file.get(), width, height, bit_depth, color_type, buffer, rows,
                 unsupported)) {
    throw Error(ErrorCode::CorruptData, path.string() + ": " + reader.message());
  }
  if (unsupported) {
    throw Error(ErrorCode::UnsupportedFormat,
                path.string() + ": only 8-bit RGB/RGBA PNG is supported (bit depth " +
                    std::to_string(bit_depth) + ", color type " + std::to_string(color_type) +
                    ")");
  }

  const std::size_t channels = color_type == PNG_COLOR_TYPE_RGB_ALPHA ? 4 : 3;
  std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height * 3);
  std::size_t o = 0;
  for (png_uint_32 y = 0; y < height; ++y) {
    const png_byte* row = rows[y];
    for (png_uint_32 x = 0; x < width; ++x) {
      data[o++] = row[x * channels];
      data[o++] = row[x * channels + 1];
      data[o++] = row[x * channels + 2];
    }
  }
  return RasterImage(static_cast<int>(width), static_cast<int>(height), Colorspace::RGB,
                     std::move(data));
}

void save_image(const RasterImage& img, const std::filesystem::path& path) {
  if (img.colorspace() != Colorspace::RGB) {
    throw Error(ErrorCode::InvalidColorspace,
                "HSV image must be converted to RGB before saving " + path.string());
  }
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");

  // libpng takes non-const row pointers even when writing.
  std::vector<png_byte> buffer(img.data().begin(), img.data().end());
  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
  const std::size_t stride = static_cast<std::size_t>(img.width()) * 3;
  for (std::size_t y = 0; y < rows.size(); ++y) rows[y] = buffer.data() + y * stride;

  PngWriter writer;
  if (!write_rows(writer, file.get(), static_cast<png_uint_32>(img.width()),
                  static_cast<png_uint_32>(img.height()), rows)) {
    throw Error(ErrorCode::IoError, path.string() + ": " + writer.message());
  }
  if (std::fflush(file.get()) != 0) {
    throw Error(ErrorCode::IoError, "failed to flush " + path.string());
  }
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  save_image(mask_to_image(mask), path);
}

}  // namespace wiltscan
