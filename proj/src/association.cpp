#include "bevmap/association.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "bevmap/errors.hpp"

namespace bevmap {

void ClipWindow::validate() const {
  if (!(longitudinal_min < longitudinal_max) || !(lateral_min < lateral_max) ||
      !(vertical_min < vertical_max)) {
    throw ConfigError("clip window requires min < max on every axis");
  }
}

bool ClipWindow::contains(const Vec3& p) const {
  return p.x() >= longitudinal_min && p.x() < longitudinal_max && p.y() >= lateral_min &&
         p.y() < lateral_max && p.z() >= vertical_min && p.z() < vertical_max;
}

SemanticPointCloud extract_local_region(const PointMap& map, const Pose& pose,
                                        const ClipWindow& clip) {
  clip.validate();
  OrientedBox box;
  box.world_from_box = pose.isometry();
  box.lo = Vec3(clip.longitudinal_min, clip.lateral_min, clip.vertical_min);
  box.hi = Vec3(clip.longitudinal_max, clip.lateral_max, clip.vertical_max);

  const Eigen::Isometry3d body_from_world = pose.isometry().inverse();
  SemanticPointCloud out;
  out.frame = Frame::kBody;
  out.pose = pose;
  for (std::uint32_t idx : map.query_obb(box)) {
    const PointXYZI& mp = map.points()[idx];
    SemanticPoint sp;
    sp.position = body_from_world * mp.position();
    sp.intensity = mp.intensity;
    out.points.push_back(sp);
  }
  return out;
}

std::vector<Projection> project_points(const CameraModel& cam,
                                       const std::vector<SemanticPoint>& pts_body) {
  std::vector<Projection> out;
  out.reserve(pts_body.size());
  for (std::size_t i = 0; i < pts_body.size(); ++i) {
    const Vec3 pc = cam.camera_from_body * pts_body[i].position;
    if (pc.z() <= 0.0) continue;
    const double u = cam.fx * pc.x() / pc.z() + cam.cx;
    const double v = cam.fy * pc.y() / pc.z() + cam.cy;
    if (u < 0.0 || u >= cam.width || v < 0.0 || v >= cam.height) continue;
    out.push_back(Projection{i, u, v, pc.z()});
  }
  return out;
}

SemanticPointCloud associate_labels(const SemanticImage& img,
                                    const std::vector<Projection>& projections,
                                    const SemanticPointCloud& cloud, bool depth_buffer) {
  SemanticPointCloud out;
  out.frame = cloud.frame;
  out.pose = cloud.pose;

  auto pixel_of = [&](const Projection& pr, int& pu, int& pv) {
    pu = static_cast<int>(std::lround(pr.u));
    pv = static_cast<int>(std::lround(pr.v));
    if (pu >= img.width) pu = img.width - 1;
    if (pv >= img.height) pv = img.height - 1;
  };

  if (depth_buffer) {
    // splatted visibility cull: a sampled occluder rarely lands on the exact
    // pixel of the point it hides, so every point claims a one-pixel
    // neighborhood, and points falling more than a depth margin behind the
    // nearest claim at their own pixel are treated as hidden
    std::vector<float> nearest(static_cast<std::size_t>(img.width) * img.height,
                               std::numeric_limits<float>::infinity());
    for (const Projection& pr : projections) {
      int pu, pv;
      pixel_of(pr, pu, pv);
      const float depth = static_cast<float>(pr.depth);
      for (int qv = std::max(0, pv - 1); qv <= std::min(img.height - 1, pv + 1); ++qv) {
        for (int qu = std::max(0, pu - 1); qu <= std::min(img.width - 1, pu + 1); ++qu) {
          float& slot = nearest[static_cast<std::size_t>(qv) * img.width + qu];
          if (depth < slot) slot = depth;
        }
      }
    }
    for (const Projection& pr : projections) {
      int pu, pv;
      pixel_of(pr, pu, pv);
      const float front = nearest[static_cast<std::size_t>(pv) * img.width + pu];
      if (pr.depth > front + 0.25 + 0.02 * pr.depth) continue;
      const std::uint8_t label = img.at(pu, pv);
      if (label == 255) continue;
      SemanticPoint sp = cloud.points[pr.point_index];
      sp.label = label;
      out.points.push_back(sp);
    }
    return out;
  }

  for (const Projection& pr : projections) {
    int pu, pv;
    pixel_of(pr, pu, pv);
    const std::uint8_t label = img.at(pu, pv);
    if (label == 255) continue;
    SemanticPoint sp = cloud.points[pr.point_index];
    sp.label = label;
    out.points.push_back(sp);
  }
  return out;
}

SemanticPointCloud build_frame_cloud(const PointMap& map, const Trajectory& traj,
                                     const CameraModel& cam, const SemanticImage& image,
                                     double t, const ClipWindow& clip, TimeLookup lookup,
                                     bool depth_buffer) {
  const Pose pose = lookup == TimeLookup::kInterpolate ? traj.interpolate(t) : traj.nearest(t);
  // the visibility buffer must see everything between the camera and the far
  // bound, or a point behind foreground surface would take that surface's
  // pixel label; the requested near bound is re-applied after association
  ClipWindow region_clip = clip;
  if (depth_buffer && region_clip.longitudinal_min > 0.0) region_clip.longitudinal_min = 0.0;
  SemanticPointCloud region = extract_local_region(map, pose, region_clip);
  const std::vector<Projection> projections = project_points(cam, region.points);
  SemanticPointCloud labeled = associate_labels(image, projections, region, depth_buffer);
  if (clip.longitudinal_min > region_clip.longitudinal_min) {
    std::size_t kept = 0;
    for (const SemanticPoint& sp : labeled.points) {
      if (clip.contains(sp.position)) labeled.points[kept++] = sp;
    }
    labeled.points.resize(kept);
  }
  return labeled;
}

}  // namespace bevmap
