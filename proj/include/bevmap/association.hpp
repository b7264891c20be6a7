#pragma once

#include <cstdint>
#include <vector>

#include "bevmap/camera.hpp"
#include "bevmap/cloud.hpp"
#include "bevmap/geometry.hpp"
#include "bevmap/image.hpp"
#include "bevmap/point_map.hpp"

namespace bevmap {

// Body-frame crop box around the vehicle. Max bounds are exclusive.
struct ClipWindow {
  double longitudinal_min = 0.0;
  double longitudinal_max = 15.0;
  double lateral_min = -10.0;
  double lateral_max = 10.0;
  double vertical_min = -3.0;
  double vertical_max = 3.0;

  void validate() const;  // throws ConfigError unless min < max per axis
  bool contains(const Vec3& body_pt) const;
};

// Map points inside the clip window, expressed in the body frame of `pose`.
// Labels come back unlabeled; intensity is preserved.
SemanticPointCloud extract_local_region(const PointMap& map, const Pose& pose,
                                        const ClipWindow& clip);

struct Projection {
  std::size_t point_index;
  double u;
  double v;
  double depth;
};

// Pinhole projection of body-frame points. Points behind the camera or
// outside the image bounds are omitted.
std::vector<Projection> project_points(const CameraModel& cam,
                                       const std::vector<SemanticPoint>& pts_body);

// Attach the label of the nearest pixel (coordinates rounded half away from
// zero) to each projected point. Points that hit an unlabeled (255) pixel or
// were never projected are dropped. With `depth_buffer` set, points hidden by
// foreground surface are culled: every point splats its depth into a
// one-pixel neighborhood, and a point falling more than a small margin
// behind the nearest splat at its own pixel is discarded.
SemanticPointCloud associate_labels(const SemanticImage& img,
                                    const std::vector<Projection>& projections,
                                    const SemanticPointCloud& cloud,
                                    bool depth_buffer = false);

enum class TimeLookup { kInterpolate, kNearest };

// extract_local_region + project_points + associate_labels at image time t.
// The returned body-frame cloud carries the pose used for the extraction.
SemanticPointCloud build_frame_cloud(const PointMap& map, const Trajectory& traj,
                                     const CameraModel& cam, const SemanticImage& image,
                                     double t, const ClipWindow& clip,
                                     TimeLookup lookup = TimeLookup::kInterpolate,
                                     bool depth_buffer = false);

}  // namespace bevmap
