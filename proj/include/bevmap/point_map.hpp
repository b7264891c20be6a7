#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "bevmap/geometry.hpp"

namespace bevmap {

// Storage matches the 32-bit PLY vertex layout so file round trips are exact.
struct PointXYZI {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;
  float intensity = 0.0f;  // [0, 255]

  Vec3 position() const { return Vec3(x, y, z); }
};

// Axis-aligned box with half-open bounds: lo <= p < hi per axis.
struct Aabb {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
  bool contains(const Vec3& p) const {
    return p.x() >= lo.x() && p.x() < hi.x() && p.y() >= lo.y() && p.y() < hi.y() &&
           p.z() >= lo.z() && p.z() < hi.z();
  }
};

// Box posed rigidly in the world; a point is inside when its box-frame
// coordinates satisfy the half-open bounds.
struct OrientedBox {
  Eigen::Isometry3d world_from_box = Eigen::Isometry3d::Identity();
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
};

// Dense world-frame point map with a uniform voxel-hash index. Query results
// are index lists into points(), sorted ascending, and equal brute-force
// filtering over all points.
class PointMap {
 public:
  PointMap() = default;
  explicit PointMap(std::vector<PointXYZI> points, double voxel_size = 4.0);

  const std::vector<PointXYZI>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  std::vector<std::uint32_t> query_aabb(const Aabb& box) const;
  std::vector<std::uint32_t> query_obb(const OrientedBox& box) const;

 private:
  std::vector<std::uint32_t> gather_candidates(const Aabb& world_bounds) const;

  std::vector<PointXYZI> points_;
  double voxel_size_ = 4.0;
  std::unordered_map<std::int64_t, std::vector<std::uint32_t>> voxels_;
};

}  // namespace bevmap
