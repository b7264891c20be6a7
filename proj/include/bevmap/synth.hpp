#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bevmap/camera.hpp"
#include "bevmap/cloud.hpp"
#include "bevmap/geometry.hpp"
#include "bevmap/grid.hpp"
#include "bevmap/image.hpp"
#include "bevmap/labels.hpp"
#include "bevmap/point_map.hpp"

namespace bevmap {

// Parametric ground surface, defined over the whole plane.
struct Surface {
  enum class Kind { kFlat, kIncline, kHill };
  Kind kind = Kind::kFlat;
  double grade = 0.0;       // incline: z = grade * x
  double amplitude = 0.0;   // hill: z = amplitude * sin(2*pi*x / wavelength)
  double wavelength = 40.0;

  double z(double x, double y) const;
};

// One coat of semantic paint. Later regions in the layout cover earlier ones.
struct PaintRegion {
  enum class Shape { kBand, kPolygon };
  Shape shape = Shape::kBand;
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;  // band, half-open max
  std::vector<Vec2> polygon;                                  // even-odd rule
  int channel = 0;
  double intensity_mean = 30.0;
  double intensity_sd = 8.0;
};

struct TrajectorySpec {
  std::vector<Vec2> path;   // polyline in world xy
  double speed = 5.0;       // m/s
  double rate_hz = 13.0;    // pose/image rate
};

// Full description of a synthetic scene; every generated artifact is a pure
// function of this plus the seed.
struct SceneSpec {
  double extent_x = 60.0;  // painted area spans x in [0, extent_x]
  double extent_y = 20.0;  // and y in [-extent_y/2, extent_y/2]
  Surface surface;
  std::vector<PaintRegion> layout;
  TrajectorySpec trajectory;
  CameraModel camera;
  std::uint64_t seed = 1;
  double density = 750.0;                  // point-map samples per m^2
  double background_intensity_mean = 20.0;  // unpainted ground
  double background_intensity_sd = 6.0;
  double grid_d = 0.2;                     // ground-truth raster resolution
  std::optional<Eigen::MatrixXd> corruption;  // per-pixel label confusion rows
  bool scans = false;                      // also simulate per-frame LiDAR scans

  void validate() const;  // throws ConfigError
};

SceneSpec default_scene();
SceneSpec scene_from_json(const nlohmann::json& j);
nlohmann::json scene_to_json(const SceneSpec& spec);
SceneSpec scene_from_json_file(const std::string& path);

// Queryable realization of a SceneSpec.
class Scene {
 public:
  explicit Scene(SceneSpec spec);

  const SceneSpec& spec() const { return spec_; }
  double z(double x, double y) const { return spec_.surface.z(x, y); }

  // Label id at (x, y): the topmost paint region's channel mapped through the
  // default label set; 255 where nothing is painted or outside the extent.
  std::uint8_t label(double x, double y) const;

  // Mean/sd of the reflectivity at (x, y); background values when unpainted.
  void intensity_params(double x, double y, double& mean, double& sd) const;

  bool in_extent(double x, double y) const;

 private:
  SceneSpec spec_;
};

// Gravity-aligned poses riding the surface along the path polyline, sampled
// at the spec rate starting from t = 0. Yaw follows the path direction.
Trajectory make_trajectory(const Scene& scene);

// Uniform jittered-grid sampling of the painted extent. Point z follows the
// surface; intensity draws from the local region's normal, clamped to
// [0, 255]. true_labels receives the scene label of every sampled point.
std::vector<PointXYZI> sample_point_map(const Scene& scene, double density,
                                        std::uint64_t seed,
                                        std::vector<std::uint8_t>* true_labels = nullptr);

// Ray-casts every pixel against the surface (bracketing march + bisection to
// 1e-4 m) and paints the scene label of the hit; 255 for sky or unpainted
// ground.
SemanticImage render_semantic_image(const Scene& scene, const CameraModel& cam,
                                    const Pose& pose);

// Ray-surface intersection used by the renderer, exposed for error analysis.
// Returns the world hit point for a pixel ray, if any.
std::optional<Vec3> cast_pixel_ray(const Scene& scene, const CameraModel& cam,
                                   const Pose& pose, double u, double v);

// Resamples every labeled pixel's channel from its true-label row of the
// model; unlabeled pixels and non-channel labels pass through.
SemanticImage corrupt_labels(const SemanticImage& img, const ObservationModel& model,
                             const LabelSet& labels, std::uint64_t seed);

// Scene label at each cell center of a grid template.
LabelRaster ground_truth_raster(const Scene& scene, const SemanticGrid& grid_template);

// Spinning 16-beam LiDAR: elevations -15..+15 degrees in 2-degree steps,
// azimuth swept at azimuth_step_deg, sensor above the body origin. Returns
// body-frame hits with surface intensities.
struct ScanConfig {
  double sensor_height = 1.9;
  double azimuth_step_deg = 0.4;
  double max_range = 50.0;
};
std::vector<SemanticPoint> simulate_scan(const Scene& scene, const Pose& pose,
                                         const ScanConfig& config, std::uint64_t seed);

}  // namespace bevmap
