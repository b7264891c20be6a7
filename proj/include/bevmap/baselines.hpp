#pragma once

#include <vector>

#include "bevmap/association.hpp"
#include "bevmap/camera.hpp"
#include "bevmap/cloud.hpp"
#include "bevmap/grid.hpp"
#include "bevmap/image.hpp"

namespace bevmap {

// Flat-ground assumption for the homography baseline.
struct GroundPlane {
  double height = 0.0;       // body-frame z of the assumed ground
  double valid_range = 30.0;  // max ray length, meters

  void validate() const;  // throws ConfigError when valid_range <= 0
};

// Casts a ray through every labeled pixel (subsampled by stride) and drops a
// labeled point where the ray meets the assumed ground plane. Rays at or
// above the horizon, or reaching the plane beyond valid_range, emit nothing.
// Output is in the body frame and carries the pose.
SemanticPointCloud planar_backproject(const CameraModel& cam, const Pose& pose,
                                      const SemanticImage& img, const GroundPlane& plane,
                                      int stride = 2);

// Body-frame clip filter, preserving labels and intensities.
SemanticPointCloud clip_cloud(const SemanticPointCloud& cloud, const ClipWindow& clip);

// Runs one live scan through the same clip + project + associate steps the
// dense path applies to extracted map regions.
SemanticPointCloud label_scan(const SemanticPointCloud& scan_body, const CameraModel& cam,
                              const SemanticImage& img, const ClipWindow& clip,
                              bool depth_buffer = false);

struct LiveFrame {
  double timestamp = 0.0;
  SemanticImage image;
  std::vector<SemanticPoint> scan;  // body frame at timestamp, labels ignored
};

// Sparse-scan mapping baseline: the dense pipeline with each frame's raw
// LiDAR scan standing in for the extracted map region. Builds into a copy of
// grid_template (expected global for whole-route maps).
SemanticGrid map_from_live_scans(const std::vector<LiveFrame>& frames, const Trajectory& traj,
                                 const CameraModel& cam, const SemanticGrid& grid_template,
                                 const LabelSet& labels, const ObservationModel& model,
                                 const IntensityModel* intensity, const ClipWindow& clip,
                                 TimeLookup lookup = TimeLookup::kInterpolate,
                                 bool depth_buffer = false, bool one_vote_per_cell = false);

}  // namespace bevmap
