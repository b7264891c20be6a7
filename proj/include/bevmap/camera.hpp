#pragma once

#include <Eigen/Geometry>

#include <string>

#include <nlohmann/json_fwd.hpp>

namespace bevmap {

// Rectified pinhole camera plus its mounting transform on the vehicle.
// Camera frame: +z forward along the optical axis, +x right, +y down.
struct CameraModel {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;
  Eigen::Isometry3d camera_from_body = Eigen::Isometry3d::Identity();

  // Throws ConfigError when focal lengths are non-positive or the principal
  // point lies outside the image.
  void validate() const;
};

CameraModel camera_from_json(const nlohmann::json& j);
nlohmann::json camera_to_json(const CameraModel& cam);
CameraModel camera_from_json_file(const std::string& path);
void camera_to_json_file(const std::string& path, const CameraModel& cam);

}  // namespace bevmap
