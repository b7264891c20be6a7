#pragma once

#include <string>

#include "bevmap/geometry.hpp"

namespace bevmap {

// Text trajectory format: one pose per line,
//   timestamp tx ty tz qx qy qz qw
// Lines starting with '#' and blank lines are skipped.
Trajectory read_trajectory(const std::string& path);

void write_trajectory(const std::string& path, const Trajectory& traj);

}  // namespace bevmap
