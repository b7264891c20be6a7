#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <vector>

namespace bevmap {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

// Timestamped rigid-body transform of the vehicle in the world frame.
// The rotation quaternion must be unit length to within 1e-6.
struct Pose {
  double timestamp = 0.0;
  Vec3 translation = Vec3::Zero();
  Quat rotation = Quat::Identity();

  Eigen::Isometry3d isometry() const;

  // Heading about +z, in (-pi, pi].
  double yaw() const;
};

bool quaternion_normalized(const Quat& q, double tol = 1e-6);

// Shortest-path spherical interpolation; q1 is negated when dot(q0, q1) < 0.
Quat slerp(const Quat& q0, const Quat& q1, double t);

enum class Direction { kBodyToWorld, kWorldToBody };

Vec3 transform_point(const Pose& pose, const Vec3& p, Direction dir);
std::vector<Vec3> transform_points(const Pose& pose, const std::vector<Vec3>& pts,
                                   Direction dir);

// Time-ordered pose sequence. Timestamps strictly increasing.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<Pose> poses);  // validates ordering

  const std::vector<Pose>& poses() const { return poses_; }
  bool empty() const { return poses_.empty(); }
  std::size_t size() const { return poses_.size(); }
  double begin_time() const;
  double end_time() const;
  bool covers(double t) const;

  // Linear translation + slerp rotation between the bracketing poses.
  // Exact pose returned when t matches a stored sample.
  // Throws std::invalid_argument on an empty trajectory and
  // std::out_of_range when t lies outside [begin_time, end_time].
  Pose interpolate(double t) const;

  // Nearest-sample alternative to interpolation. Same error contract.
  const Pose& nearest(double t) const;

 private:
  std::vector<Pose> poses_;
};

inline double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace bevmap
