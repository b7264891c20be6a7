#include "bevmap/camera.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "bevmap/errors.hpp"

namespace bevmap {

void CameraModel::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw ConfigError("camera focal lengths must be positive");
  if (width <= 0 || height <= 0) throw ConfigError("camera image size must be positive");
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
    throw ConfigError("camera principal point must lie inside the image");
  }
}

using nlohmann::json;

CameraModel camera_from_json(const json& j) {
  CameraModel cam;
  try {
    cam.fx = j.at("fx").get<double>();
    cam.fy = j.at("fy").get<double>();
    cam.cx = j.at("cx").get<double>();
    cam.cy = j.at("cy").get<double>();
    cam.width = j.at("width").get<int>();
    cam.height = j.at("height").get<int>();
    const json& e = j.at("camera_from_body");
    const auto t = e.at("translation").get<std::vector<double>>();
    const auto q = e.at("rotation_qxyzw").get<std::vector<double>>();
    if (t.size() != 3 || q.size() != 4) {
      throw ConfigError("camera extrinsic needs translation[3] and rotation_qxyzw[4]");
    }
    Eigen::Quaterniond rot(q[3], q[0], q[1], q[2]);
    if (std::abs(rot.norm() - 1.0) > 1e-3) {
      throw ConfigError("camera extrinsic quaternion is not unit length");
    }
    rot.normalize();
    cam.camera_from_body = Eigen::Isometry3d::Identity();
    cam.camera_from_body.linear() = rot.toRotationMatrix();
    cam.camera_from_body.translation() = Eigen::Vector3d(t[0], t[1], t[2]);
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("bad camera json: ") + ex.what());
  }
  cam.validate();
  return cam;
}

json camera_to_json(const CameraModel& cam) {
  const Eigen::Quaterniond q(cam.camera_from_body.linear());
  const Eigen::Vector3d t = cam.camera_from_body.translation();
  return json{
      {"fx", cam.fx},
      {"fy", cam.fy},
      {"cx", cam.cx},
      {"cy", cam.cy},
      {"width", cam.width},
      {"height", cam.height},
      {"camera_from_body",
       {{"translation", {t.x(), t.y(), t.z()}},
        {"rotation_qxyzw", {q.x(), q.y(), q.z(), q.w()}}}},
  };
}

CameraModel camera_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw IoError(path + ": " + ex.what());
  }
  return camera_from_json(j);
}

void camera_to_json_file(const std::string& path, const CameraModel& cam) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << camera_to_json(cam).dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace bevmap
