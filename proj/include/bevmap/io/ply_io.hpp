#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bevmap/point_map.hpp"

namespace bevmap {

// PLY point cloud with vertex properties x y z intensity (32-bit floats),
// ASCII or binary-little-endian. Unknown vertex properties are skipped;
// a missing intensity property reads as 0.
std::vector<PointXYZI> read_ply(const std::string& path);
void write_ply(const std::string& path, const std::vector<PointXYZI>& points,
               bool binary = true);

// CSV fallback: header "x,y,z,intensity", one point per line.
std::vector<PointXYZI> read_point_csv(const std::string& path);
void write_point_csv(const std::string& path, const std::vector<PointXYZI>& points);

// Dispatch by extension: .ply or .csv.
std::vector<PointXYZI> read_point_file(const std::string& path);

// Raw per-point byte sidecar (true labels of a synthetic point map).
std::vector<std::uint8_t> read_label_sidecar(const std::string& path);
void write_label_sidecar(const std::string& path, const std::vector<std::uint8_t>& labels);

}  // namespace bevmap
