#pragma once

#include <string>

#include "bevmap/image.hpp"

namespace bevmap {

// 8-bit single-channel PNG; pixel value = label id, 255 = unlabeled.
// Reading rejects anything that is not 8-bit grayscale.
SemanticImage read_gray_png(const std::string& path);
void write_gray_png(const std::string& path, const SemanticImage& img);

RgbImage read_rgb_png(const std::string& path);
void write_rgb_png(const std::string& path, const RgbImage& img);

}  // namespace bevmap
