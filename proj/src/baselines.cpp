#include "bevmap/baselines.hpp"

#include "bevmap/errors.hpp"

namespace bevmap {

void GroundPlane::validate() const {
  if (!(valid_range > 0.0)) throw ConfigError("ground plane valid_range must be positive");
}

SemanticPointCloud planar_backproject(const CameraModel& cam, const Pose& pose,
                                      const SemanticImage& img, const GroundPlane& plane,
                                      int stride) {
  plane.validate();
  if (stride < 1) throw ConfigError("back-projection stride must be >= 1");

  const Eigen::Isometry3d body_from_camera = cam.camera_from_body.inverse();
  const Vec3 origin = body_from_camera.translation();
  const Eigen::Matrix3d rot = body_from_camera.linear();

  SemanticPointCloud out;
  out.frame = Frame::kBody;
  out.pose = pose;
  for (int v = 0; v < img.height; v += stride) {
    for (int u = 0; u < img.width; u += stride) {
      const std::uint8_t label = img.at(u, v);
      if (label == LabelSet::kUnlabeled) continue;
      Vec3 dir = rot * Vec3((u - cam.cx) / cam.fx, (v - cam.cy) / cam.fy, 1.0);
      dir.normalize();
      if (dir.z() == 0.0) continue;
      const double t = (plane.height - origin.z()) / dir.z();
      if (t <= 0.0 || t > plane.valid_range) continue;
      SemanticPoint pt;
      pt.position = origin + t * dir;
      pt.label = label;
      out.points.push_back(pt);
    }
  }
  return out;
}

SemanticPointCloud clip_cloud(const SemanticPointCloud& cloud, const ClipWindow& clip) {
  clip.validate();
  SemanticPointCloud out;
  out.frame = cloud.frame;
  out.pose = cloud.pose;
  for (const SemanticPoint& pt : cloud.points) {
    if (clip.contains(pt.position)) out.points.push_back(pt);
  }
  return out;
}

SemanticPointCloud label_scan(const SemanticPointCloud& scan_body, const CameraModel& cam,
                              const SemanticImage& img, const ClipWindow& clip,
                              bool depth_buffer) {
  const SemanticPointCloud clipped = clip_cloud(scan_body, clip);
  const std::vector<Projection> projections = project_points(cam, clipped.points);
  return associate_labels(img, projections, clipped, depth_buffer);
}

SemanticGrid map_from_live_scans(const std::vector<LiveFrame>& frames, const Trajectory& traj,
                                 const CameraModel& cam, const SemanticGrid& grid_template,
                                 const LabelSet& labels, const ObservationModel& model,
                                 const IntensityModel* intensity, const ClipWindow& clip,
                                 TimeLookup lookup, bool depth_buffer, bool one_vote_per_cell) {
  SemanticGrid grid = grid_template;
  for (const LiveFrame& frame : frames) {
    if (!traj.covers(frame.timestamp)) continue;
    const Pose pose = lookup == TimeLookup::kInterpolate ? traj.interpolate(frame.timestamp)
                                                         : traj.nearest(frame.timestamp);
    SemanticPointCloud scan;
    scan.frame = Frame::kBody;
    scan.pose = pose;
    scan.points = frame.scan;
    SemanticPointCloud labeled = label_scan(scan, cam, frame.image, clip, depth_buffer);
    if (grid.frame() == GridFrame::kGlobal) labeled = to_world(labeled);
    grid.integrate(labeled, labels, model, intensity, one_vote_per_cell);
  }
  return grid;
}

}  // namespace bevmap
