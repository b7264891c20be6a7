#include "bevmap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bevmap/errors.hpp"

namespace bevmap {

Eigen::Isometry3d Pose::isometry() const {
  Eigen::Isometry3d iso = Eigen::Isometry3d::Identity();
  iso.linear() = rotation.normalized().toRotationMatrix();
  iso.translation() = translation;
  return iso;
}

double Pose::yaw() const {
  const Eigen::Matrix3d r = rotation.normalized().toRotationMatrix();
  return std::atan2(r(1, 0), r(0, 0));
}

bool quaternion_normalized(const Quat& q, double tol) {
  return std::abs(q.norm() - 1.0) <= tol;
}

Quat slerp(const Quat& q0, const Quat& q1, double t) {
  Quat a = q0.normalized();
  Quat b = q1.normalized();
  double dot = a.dot(b);
  if (dot < 0.0) {  // take the short arc
    b.coeffs() = -b.coeffs();
    dot = -dot;
  }
  dot = std::min(dot, 1.0);
  const double theta = std::acos(dot);
  if (theta < 1e-9) {
    // nearly parallel: nlerp
    Quat out;
    out.coeffs() = (1.0 - t) * a.coeffs() + t * b.coeffs();
    out.normalize();
    return out;
  }
  const double s = std::sin(theta);
  const double w0 = std::sin((1.0 - t) * theta) / s;
  const double w1 = std::sin(t * theta) / s;
  Quat out;
  out.coeffs() = w0 * a.coeffs() + w1 * b.coeffs();
  out.normalize();
  return out;
}

Vec3 transform_point(const Pose& pose, const Vec3& p, Direction dir) {
  const Eigen::Isometry3d iso = pose.isometry();
  if (dir == Direction::kBodyToWorld) {
    return iso * p;
  }
  return iso.inverse() * p;
}

std::vector<Vec3> transform_points(const Pose& pose, const std::vector<Vec3>& pts,
                                   Direction dir) {
  const Eigen::Isometry3d iso =
      dir == Direction::kBodyToWorld ? pose.isometry() : pose.isometry().inverse();
  std::vector<Vec3> out;
  out.reserve(pts.size());
  for (const Vec3& p : pts) {
    out.push_back(iso * p);
  }
  return out;
}

Trajectory::Trajectory(std::vector<Pose> poses) : poses_(std::move(poses)) {
  for (std::size_t i = 0; i + 1 < poses_.size(); ++i) {
    if (!(poses_[i].timestamp < poses_[i + 1].timestamp)) {
      throw ConfigError("trajectory timestamps must be strictly increasing");
    }
  }
  for (const Pose& p : poses_) {
    if (!quaternion_normalized(p.rotation)) {
      throw ConfigError("trajectory pose quaternion is not unit length");
    }
  }
}

double Trajectory::begin_time() const {
  if (poses_.empty()) throw std::invalid_argument("empty trajectory");
  return poses_.front().timestamp;
}

double Trajectory::end_time() const {
  if (poses_.empty()) throw std::invalid_argument("empty trajectory");
  return poses_.back().timestamp;
}

bool Trajectory::covers(double t) const {
  return !poses_.empty() && t >= begin_time() && t <= end_time();
}

Pose Trajectory::interpolate(double t) const {
  if (poses_.empty()) throw std::invalid_argument("empty trajectory");
  if (t < begin_time() || t > end_time()) {
    throw std::out_of_range("timestamp outside trajectory range");
  }
  auto it = std::lower_bound(
      poses_.begin(), poses_.end(), t,
      [](const Pose& p, double ts) { return p.timestamp < ts; });
  if (it->timestamp == t) return *it;
  const Pose& hi = *it;
  const Pose& lo = *(it - 1);
  const double f = (t - lo.timestamp) / (hi.timestamp - lo.timestamp);
  Pose out;
  out.timestamp = t;
  out.translation = (1.0 - f) * lo.translation + f * hi.translation;
  out.rotation = slerp(lo.rotation, hi.rotation, f);
  return out;
}

const Pose& Trajectory::nearest(double t) const {
  if (poses_.empty()) throw std::invalid_argument("empty trajectory");
  if (t < begin_time() || t > end_time()) {
    throw std::out_of_range("timestamp outside trajectory range");
  }
  auto it = std::lower_bound(
      poses_.begin(), poses_.end(), t,
      [](const Pose& p, double ts) { return p.timestamp < ts; });
  if (it == poses_.begin()) return *it;
  const Pose& hi = *it;
  const Pose& lo = *(it - 1);
  return (t - lo.timestamp) <= (hi.timestamp - t) ? lo : hi;
}

}  // namespace bevmap
