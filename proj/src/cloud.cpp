#include "bevmap/cloud.hpp"

#include "bevmap/errors.hpp"

namespace bevmap {

SemanticPointCloud to_world(const SemanticPointCloud& cloud) {
  if (cloud.frame == Frame::kWorld) return cloud;
  if (!cloud.pose) throw InternalError("body-frame cloud has no pose");
  const Eigen::Isometry3d iso = cloud.pose->isometry();
  SemanticPointCloud out;
  out.frame = Frame::kWorld;
  out.pose = cloud.pose;
  out.points.reserve(cloud.points.size());
  for (const SemanticPoint& p : cloud.points) {
    out.points.push_back({iso * p.position, p.label, p.intensity});
  }
  return out;
}

SemanticPointCloud to_body(const SemanticPointCloud& cloud, const Pose& pose) {
  const Eigen::Isometry3d iso = pose.isometry().inverse();
  SemanticPointCloud out;
  out.frame = Frame::kBody;
  out.pose = pose;
  out.points.reserve(cloud.points.size());
  if (cloud.frame == Frame::kWorld) {
    for (const SemanticPoint& p : cloud.points) {
      out.points.push_back({iso * p.position, p.label, p.intensity});
    }
  } else {
    if (!cloud.pose) throw InternalError("body-frame cloud has no pose");
    const Eigen::Isometry3d rel = iso * cloud.pose->isometry();
    for (const SemanticPoint& p : cloud.points) {
      out.points.push_back({rel * p.position, p.label, p.intensity});
    }
  }
  return out;
}

}  // namespace bevmap
