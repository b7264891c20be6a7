#include "bevmap/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bevmap/errors.hpp"

namespace bevmap {

namespace {

SemanticGrid make_grid(const BuildConfig& cfg, const Trajectory& traj,
                       const Pose& first_pose) {
  if (cfg.grid.from) return grid_like(*cfg.grid.from);

  const ClipWindow& clip = cfg.clip;
  if (cfg.grid.frame == GridFrame::kLocal) {
    const double x0 = cfg.grid.origin ? (*cfg.grid.origin)[0] : clip.longitudinal_min;
    const double y0 = cfg.grid.origin ? (*cfg.grid.origin)[1] : clip.lateral_min;
    int h, w;
    if (cfg.grid.size) {
      h = (*cfg.grid.size)[0];
      w = (*cfg.grid.size)[1];
    } else {
      w = static_cast<int>(std::ceil((clip.longitudinal_max - clip.longitudinal_min) / cfg.d));
      h = static_cast<int>(std::ceil((clip.lateral_max - clip.lateral_min) / cfg.d));
    }
    return SemanticGrid::local(first_pose, x0, y0, h, w, cfg.d);
  }

  if (cfg.grid.origin && cfg.grid.size) {
    return SemanticGrid::global((*cfg.grid.origin)[0], (*cfg.grid.origin)[1],
                                (*cfg.grid.size)[0], (*cfg.grid.size)[1], cfg.d);
  }

  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  if (!traj.empty()) {
    min_x = min_y = std::numeric_limits<double>::max();
    max_x = max_y = std::numeric_limits<double>::lowest();
  }
  for (const Pose& p : traj.poses()) {
    min_x = std::min(min_x, p.translation.x());
    max_x = std::max(max_x, p.translation.x());
    min_y = std::min(min_y, p.translation.y());
    max_y = std::max(max_y, p.translation.y());
  }
  const double reach = std::hypot(
      std::max(std::abs(clip.longitudinal_min), std::abs(clip.longitudinal_max)),
      std::max(std::abs(clip.lateral_min), std::abs(clip.lateral_max)));
  const double x0 = std::floor((min_x - reach) / cfg.d) * cfg.d;
  const double y0 = std::floor((min_y - reach) / cfg.d) * cfg.d;
  const int w = static_cast<int>(std::ceil((max_x + reach - x0) / cfg.d));
  const int h = static_cast<int>(std::ceil((max_y + reach - y0) / cfg.d));
  return SemanticGrid::global(x0, y0, h, w, cfg.d);
}

}  // namespace

BuildResult build_map(const PointMap* map, const Trajectory& traj, const CameraModel& cam,
                      const LabelSet& labels, const ObservationModel& model,
                      std::vector<FrameInput> frames, const BuildConfig& cfg) {
  cfg.clip.validate();
  if (cfg.mode == MapMode::kDense && map == nullptr) {
    throw ConfigError("dense mode needs a point map");
  }

  std::stable_sort(frames.begin(), frames.end(),
                   [](const FrameInput& a, const FrameInput& b) {
                     return a.timestamp < b.timestamp;
                   });

  BuildResult result;
  result.frames_total = static_cast<int>(frames.size());

  const IntensityModel* intensity = cfg.use_intensity ? &cfg.intensity : nullptr;
  std::optional<SemanticGrid> grid;

  for (FrameInput& frame : frames) {
    if (!traj.covers(frame.timestamp)) {
      result.skipped_timestamps.push_back(frame.timestamp);
      continue;
    }
    const Pose pose = cfg.lookup == TimeLookup::kInterpolate ? traj.interpolate(frame.timestamp)
                                                             : traj.nearest(frame.timestamp);
    if (!grid) grid = make_grid(cfg, traj, pose);
    if (grid->frame() == GridFrame::kLocal) {
      maybe_shift_local_map(*grid, pose, cfg.shift_translation, cfg.shift_rotation);
    }

    SemanticPointCloud cloud;
    switch (cfg.mode) {
      case MapMode::kDense:
        cloud = build_frame_cloud(*map, traj, cam, frame.image, frame.timestamp, cfg.clip,
                                  cfg.lookup, cfg.occlusion);
        break;
      case MapMode::kLive: {
        SemanticPointCloud scan;
        scan.frame = Frame::kBody;
        scan.pose = pose;
        scan.points = std::move(frame.scan);
        cloud = label_scan(scan, cam, frame.image, cfg.clip, cfg.occlusion);
        break;
      }
      case MapMode::kPlanar:
        cloud = clip_cloud(planar_backproject(cam, pose, frame.image, cfg.plane,
                                              cfg.planar_stride),
                           cfg.clip);
        break;
    }
    if (grid->frame() == GridFrame::kGlobal) cloud = to_world(cloud);
    grid->integrate(cloud, labels, model, intensity, cfg.one_vote_per_cell);
    result.points_integrated += cloud.points.size();
    ++result.frames_used;
  }

  if (!grid) {
    // no usable frame; still emit an empty grid of the configured shape
    const Pose anchor = traj.empty() ? Pose{} : traj.poses().front();
    grid = make_grid(cfg, traj, anchor);
  }

  result.raw_labels = grid->extract_label_map();
  result.filled_labels = fill_holes(result.raw_labels, cfg.fill_window, cfg.fill_min_votes);
  result.grid = std::move(*grid);
  return result;
}

}  // namespace bevmap
