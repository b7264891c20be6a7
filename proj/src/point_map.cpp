#include "bevmap/point_map.hpp"

#include <algorithm>
#include <cmath>

namespace bevmap {

namespace {

std::int64_t voxel_key(int ix, int iy, int iz) {
  // 21 bits per axis, offset to keep coordinates positive
  const std::int64_t bias = 1 << 20;
  return ((static_cast<std::int64_t>(ix) + bias) << 42) |
         ((static_cast<std::int64_t>(iy) + bias) << 21) |
         (static_cast<std::int64_t>(iz) + bias);
}

int voxel_coord(double v, double size) {
  return static_cast<int>(std::floor(v / size));
}

}  // namespace

PointMap::PointMap(std::vector<PointXYZI> points, double voxel_size)
    : points_(std::move(points)), voxel_size_(voxel_size) {
  for (std::uint32_t i = 0; i < points_.size(); ++i) {
    const PointXYZI& p = points_[i];
    const std::int64_t key = voxel_key(voxel_coord(p.x, voxel_size_),
                                       voxel_coord(p.y, voxel_size_),
                                       voxel_coord(p.z, voxel_size_));
    voxels_[key].push_back(i);
  }
}

std::vector<std::uint32_t> PointMap::gather_candidates(const Aabb& world_bounds) const {
  std::vector<std::uint32_t> out;
  const int x0 = voxel_coord(world_bounds.lo.x(), voxel_size_);
  const int y0 = voxel_coord(world_bounds.lo.y(), voxel_size_);
  const int z0 = voxel_coord(world_bounds.lo.z(), voxel_size_);
  const int x1 = voxel_coord(world_bounds.hi.x(), voxel_size_);
  const int y1 = voxel_coord(world_bounds.hi.y(), voxel_size_);
  const int z1 = voxel_coord(world_bounds.hi.z(), voxel_size_);
  for (int ix = x0; ix <= x1; ++ix) {
    for (int iy = y0; iy <= y1; ++iy) {
      for (int iz = z0; iz <= z1; ++iz) {
        auto it = voxels_.find(voxel_key(ix, iy, iz));
        if (it == voxels_.end()) continue;
        out.insert(out.end(), it->second.begin(), it->second.end());
      }
    }
  }
  return out;
}

std::vector<std::uint32_t> PointMap::query_aabb(const Aabb& box) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i : gather_candidates(box)) {
    if (box.contains(points_[i].position())) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> PointMap::query_obb(const OrientedBox& box) const {
  // world-space bounds of the oriented box for candidate gathering
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::max());
  Vec3 hi = Vec3::Constant(std::numeric_limits<double>::lowest());
  for (int corner = 0; corner < 8; ++corner) {
    const Vec3 c((corner & 1) ? box.hi.x() : box.lo.x(),
                 (corner & 2) ? box.hi.y() : box.lo.y(),
                 (corner & 4) ? box.hi.z() : box.lo.z());
    const Vec3 w = box.world_from_box * c;
    lo = lo.cwiseMin(w);
    hi = hi.cwiseMax(w);
  }
  const Eigen::Isometry3d box_from_world = box.world_from_box.inverse();
  std::vector<std::uint32_t> out;
  for (std::uint32_t i : gather_candidates({lo, hi})) {
    const Vec3 local = box_from_world * points_[i].position();
    if (local.x() >= box.lo.x() && local.x() < box.hi.x() &&
        local.y() >= box.lo.y() && local.y() < box.hi.y() &&
        local.z() >= box.lo.z() && local.z() < box.hi.z()) {
      out.push_back(i);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace bevmap
