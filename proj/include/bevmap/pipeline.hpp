#pragma once

#include <array>
#include <optional>
#include <vector>

#include "bevmap/association.hpp"
#include "bevmap/baselines.hpp"
#include "bevmap/camera.hpp"
#include "bevmap/grid.hpp"
#include "bevmap/image.hpp"
#include "bevmap/io/grid_io.hpp"
#include "bevmap/labels.hpp"
#include "bevmap/point_map.hpp"

namespace bevmap {

enum class MapMode { kDense, kLive, kPlanar };

// How the output grid is framed and sized. A sidecar spec wins outright;
// otherwise a global grid takes an explicit origin/size or grows one from the
// trajectory bounding box plus the clip reach, and a local grid mirrors the
// clip window around the anchor.
struct GridSetup {
  GridFrame frame = GridFrame::kGlobal;
  std::optional<GridMeta> from;
  std::optional<std::array<double, 2>> origin;  // x0, y0
  std::optional<std::array<int, 2>> size;       // H, W
};

struct BuildConfig {
  MapMode mode = MapMode::kDense;
  double d = 0.2;
  ClipWindow clip;
  GridSetup grid;
  bool use_intensity = false;
  IntensityModel intensity;
  double shift_translation = 1.0;  // local-frame re-anchor thresholds
  double shift_rotation = 0.1;
  int fill_window = 3;
  int fill_min_votes = 3;
  bool occlusion = false;  // depth-buffer pixel association
  bool one_vote_per_cell = false;
  TimeLookup lookup = TimeLookup::kInterpolate;
  GroundPlane plane;  // planar mode
  int planar_stride = 2;
};

struct FrameInput {
  double timestamp = 0.0;
  SemanticImage image;
  std::vector<SemanticPoint> scan;  // live mode, body frame
};

struct BuildResult {
  SemanticGrid grid;
  LabelRaster raw_labels;
  LabelRaster filled_labels;
  int frames_total = 0;
  int frames_used = 0;
  std::vector<double> skipped_timestamps;  // outside the trajectory
  std::size_t points_integrated = 0;
};

// End-to-end map construction over already-loaded inputs. Frames are
// processed in timestamp order; frames outside the trajectory are skipped
// and reported. `map` may be null except in dense mode.
BuildResult build_map(const PointMap* map, const Trajectory& traj, const CameraModel& cam,
                      const LabelSet& labels, const ObservationModel& model,
                      std::vector<FrameInput> frames, const BuildConfig& cfg);

}  // namespace bevmap
