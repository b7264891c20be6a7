#include "bevmap/io/trajectory_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bevmap/errors.hpp"

namespace bevmap {

Trajectory read_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<Pose> poses;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double t, tx, ty, tz, qx, qy, qz, qw;
    if (!(ls >> t >> tx >> ty >> tz >> qx >> qy >> qz >> qw)) {
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": expected 'timestamp tx ty tz qx qy qz qw'");
    }
    std::string extra;
    if (ls >> extra) {
      throw IoError(path + ":" + std::to_string(line_no) + ": trailing data '" + extra + "'");
    }
    Pose pose;
    pose.timestamp = t;
    pose.translation = Vec3(tx, ty, tz);
    pose.rotation = Quat(qw, qx, qy, qz);
    if (!quaternion_normalized(pose.rotation, 1e-3)) {
      throw IoError(path + ":" + std::to_string(line_no) + ": quaternion is not unit length");
    }
    // renormalize coarse input, but leave already-unit values untouched so
    // read -> write round trips are byte-stable
    if (!quaternion_normalized(pose.rotation, 1e-9)) pose.rotation.normalize();
    poses.push_back(pose);
  }
  try {
    return Trajectory(std::move(poses));
  } catch (const ConfigError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_trajectory(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  char line[256];
  for (const Pose& p : traj.poses()) {
    std::snprintf(line, sizeof(line), "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                  p.timestamp, p.translation.x(), p.translation.y(), p.translation.z(),
                  p.rotation.x(), p.rotation.y(), p.rotation.z(), p.rotation.w());
    out << line;
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace bevmap
