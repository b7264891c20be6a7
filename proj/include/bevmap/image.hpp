#pragma once

#include <cstdint>
#include <vector>

#include "bevmap/labels.hpp"

namespace bevmap {

// Per-pixel label-id raster. Row-major, 8-bit; 255 = unlabeled.
struct SemanticImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> labels;

  SemanticImage() = default;
  SemanticImage(int w, int h, std::uint8_t fill = LabelSet::kUnlabeled)
      : width(w), height(h), labels(static_cast<std::size_t>(w) * h, fill) {}

  bool in_bounds(int u, int v) const {
    return u >= 0 && u < width && v >= 0 && v < height;
  }
  std::uint8_t at(int u, int v) const {
    return labels[static_cast<std::size_t>(v) * width + u];
  }
  std::uint8_t& at(int u, int v) {
    return labels[static_cast<std::size_t>(v) * width + u];
  }
};

// True when every pixel is a valid label id of the set, or 255.
bool labels_valid(const SemanticImage& img, const LabelSet& labels);

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 3 bytes per pixel, row-major

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::uint8_t* px(int u, int v) { return &data[(static_cast<std::size_t>(v) * width + u) * 3]; }
  const std::uint8_t* px(int u, int v) const {
    return &data[(static_cast<std::size_t>(v) * width + u) * 3];
  }
};

}  // namespace bevmap
