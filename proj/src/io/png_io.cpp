#include "bevmap/io/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <vector>

#include "bevmap/errors.hpp"

namespace bevmap {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_png(const std::string& path, int width, int height, int color_type,
               const std::uint8_t* data, std::size_t row_bytes) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot open for writing: " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng init failed for " + path);
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng init failed for " + path);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng write error for " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(height);
  for (int v = 0; v < height; ++v) {
    rows[v] = const_cast<png_bytep>(data + static_cast<std::size_t>(v) * row_bytes);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

struct PngDecoded {
  int width = 0;
  int height = 0;
  int color_type = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> data;
};

PngDecoded read_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot open: " + path);
  png_byte header[8];
  if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0) {
    throw IoError("not a PNG file: " + path);
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng init failed for " + path);
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng init failed for " + path);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng read error for " + path);
  }
  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  PngDecoded out;
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.color_type = png_get_color_type(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  out.data.resize(row_bytes * out.height);
  std::vector<png_bytep> rows(out.height);
  for (int v = 0; v < out.height; ++v) {
    rows[v] = out.data.data() + static_cast<std::size_t>(v) * row_bytes;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

}  // namespace

SemanticImage read_gray_png(const std::string& path) {
  PngDecoded dec = read_png(path);
  if (dec.color_type != PNG_COLOR_TYPE_GRAY || dec.bit_depth != 8) {
    throw IoError("expected 8-bit single-channel PNG: " + path);
  }
  SemanticImage img(dec.width, dec.height);
  img.labels = std::move(dec.data);
  return img;
}

void write_gray_png(const std::string& path, const SemanticImage& img) {
  write_png(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, img.labels.data(),
            static_cast<std::size_t>(img.width));
}

RgbImage read_rgb_png(const std::string& path) {
  PngDecoded dec = read_png(path);
  if (dec.color_type != PNG_COLOR_TYPE_RGB || dec.bit_depth != 8) {
    throw IoError("expected 8-bit RGB PNG: " + path);
  }
  RgbImage img(dec.width, dec.height);
  img.data = std::move(dec.data);
  return img;
}

void write_rgb_png(const std::string& path, const RgbImage& img) {
  write_png(path, img.width, img.height, PNG_COLOR_TYPE_RGB, img.data.data(),
            static_cast<std::size_t>(img.width) * 3);
}

}  // namespace bevmap
