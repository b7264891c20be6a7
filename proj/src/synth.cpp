#include "bevmap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "bevmap/errors.hpp"

namespace bevmap {

namespace {

constexpr double kRayTol = 1e-4;
constexpr int kMaxBisect = 64;
constexpr double kRayMax = 150.0;

bool point_in_polygon(const std::vector<Vec2>& poly, double x, double y) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    if ((poly[i].y() > y) == (poly[j].y() > y)) continue;
    const double xint = poly[j].x() + (y - poly[j].y()) / (poly[i].y() - poly[j].y()) *
                                          (poly[i].x() - poly[j].x());
    if (x < xint) inside = !inside;
  }
  return inside;
}

bool region_contains(const PaintRegion& region, double x, double y) {
  if (region.shape == PaintRegion::Shape::kBand) {
    return x >= region.x_min && x < region.x_max && y >= region.y_min && y < region.y_max;
  }
  return point_in_polygon(region.polygon, x, y);
}

}  // namespace

double Surface::z(double x, double y) const {
  (void)y;
  switch (kind) {
    case Kind::kFlat:
      return 0.0;
    case Kind::kIncline:
      return grade * x;
    case Kind::kHill:
      return amplitude * std::sin(2.0 * M_PI * x / wavelength);
  }
  return 0.0;
}

void SceneSpec::validate() const {
  if (!(extent_x > 0.0) || !(extent_y > 0.0)) throw ConfigError("scene extent must be positive");
  if (surface.kind == Surface::Kind::kHill && !(surface.wavelength > 0.0)) {
    throw ConfigError("hill wavelength must be positive");
  }
  const double tol = 1e-9;
  const double y_lo = -extent_y / 2.0, y_hi = extent_y / 2.0;
  for (const PaintRegion& region : layout) {
    if (region.channel < 0 || region.channel >= LabelSet::kNumChannels) {
      throw ConfigError("paint region channel out of range");
    }
    if (region.intensity_mean < 0.0 || region.intensity_mean > 255.0) {
      throw ConfigError("paint region intensity mean must be in [0, 255]");
    }
    if (region.intensity_sd < 0.0) throw ConfigError("paint region intensity sd must be >= 0");
    if (region.shape == PaintRegion::Shape::kBand) {
      if (!(region.x_min < region.x_max) || !(region.y_min < region.y_max)) {
        throw ConfigError("paint band requires min < max");
      }
      if (region.x_min < -tol || region.x_max > extent_x + tol || region.y_min < y_lo - tol ||
          region.y_max > y_hi + tol) {
        throw ConfigError("paint band lies outside the scene extent");
      }
    } else {
      if (region.polygon.size() < 3) throw ConfigError("paint polygon needs >= 3 vertices");
      for (const Vec2& p : region.polygon) {
        if (p.x() < -tol || p.x() > extent_x + tol || p.y() < y_lo - tol || p.y() > y_hi + tol) {
          throw ConfigError("paint polygon lies outside the scene extent");
        }
      }
    }
  }
  if (trajectory.path.size() < 2) throw ConfigError("trajectory path needs >= 2 vertices");
  if (!(trajectory.speed > 0.0)) throw ConfigError("trajectory speed must be positive");
  if (!(trajectory.rate_hz > 0.0)) throw ConfigError("trajectory rate must be positive");
  if (!(density > 0.0)) throw ConfigError("point density must be positive");
  if (!(grid_d > 0.0)) throw ConfigError("grid resolution must be positive");
  camera.validate();
  if (corruption) {
    if (corruption->rows() != LabelSet::kNumChannels ||
        corruption->cols() != LabelSet::kNumChannels) {
      throw ConfigError("corruption matrix must be 5x5");
    }
  }
}

SceneSpec default_scene() {
  SceneSpec spec;
  spec.extent_x = 60.0;
  spec.extent_y = 20.0;
  spec.surface.kind = Surface::Kind::kFlat;

  auto band = [](double x0, double x1, double y0, double y1, int channel, double mean,
                 double sd) {
    PaintRegion r;
    r.shape = PaintRegion::Shape::kBand;
    r.x_min = x0;
    r.x_max = x1;
    r.y_min = y0;
    r.y_max = y1;
    r.channel = channel;
    r.intensity_mean = mean;
    r.intensity_sd = sd;
    return r;
  };

  spec.layout.push_back(band(0.0, 60.0, -10.0, 10.0, 3, 25.0, 8.0));   // vegetation base
  spec.layout.push_back(band(0.0, 60.0, -6.0, -3.4, 4, 35.0, 8.0));    // sidewalks
  spec.layout.push_back(band(0.0, 60.0, 3.4, 6.0, 4, 35.0, 8.0));
  spec.layout.push_back(band(0.0, 60.0, -3.4, 3.4, 0, 30.0, 8.0));     // road
  for (double x = 0.0; x < 60.0; x += 6.0) {                           // dashed center line
    spec.layout.push_back(band(x, x + 3.0, -0.25, 0.25, 2, 120.0, 15.0));
  }
  spec.layout.push_back(band(28.0, 31.0, -3.4, 3.4, 1, 60.0, 10.0));   // crosswalk

  spec.trajectory.path = {Vec2(-16.0, 0.0), Vec2(62.0, 0.0)};
  spec.trajectory.speed = 5.0;
  spec.trajectory.rate_hz = 13.0;

  CameraModel cam;
  cam.fx = 420.0;
  cam.fy = 420.0;
  cam.cx = 320.0;
  cam.cy = 240.0;
  cam.width = 640;
  cam.height = 480;
  const double pitch = 10.0 * M_PI / 180.0;  // optical axis tilted down
  Eigen::Matrix3d body_from_cam_rot;
  body_from_cam_rot.col(0) = Vec3(0.0, -1.0, 0.0);                        // camera x: right
  body_from_cam_rot.col(1) = Vec3(-std::sin(pitch), 0.0, -std::cos(pitch));  // camera y: down
  body_from_cam_rot.col(2) = Vec3(std::cos(pitch), 0.0, -std::sin(pitch));   // camera z: ahead
  Eigen::Isometry3d body_from_camera = Eigen::Isometry3d::Identity();
  body_from_camera.linear() = body_from_cam_rot;
  body_from_camera.translation() = Vec3(0.4, 0.0, 1.6);
  cam.camera_from_body = body_from_camera.inverse();
  spec.camera = cam;

  spec.seed = 7;
  spec.density = 750.0;
  spec.grid_d = 0.2;
  return spec;
}

Scene::Scene(SceneSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

bool Scene::in_extent(double x, double y) const {
  return x >= 0.0 && x < spec_.extent_x && y >= -spec_.extent_y / 2.0 &&
         y < spec_.extent_y / 2.0;
}

std::uint8_t Scene::label(double x, double y) const {
  if (!in_extent(x, y)) return LabelSet::kUnlabeled;
  for (auto it = spec_.layout.rbegin(); it != spec_.layout.rend(); ++it) {
    if (region_contains(*it, x, y)) return static_cast<std::uint8_t>(it->channel);
  }
  return LabelSet::kUnlabeled;
}

void Scene::intensity_params(double x, double y, double& mean, double& sd) const {
  if (in_extent(x, y)) {
    for (auto it = spec_.layout.rbegin(); it != spec_.layout.rend(); ++it) {
      if (region_contains(*it, x, y)) {
        mean = it->intensity_mean;
        sd = it->intensity_sd;
        return;
      }
    }
  }
  mean = spec_.background_intensity_mean;
  sd = spec_.background_intensity_sd;
}

Trajectory make_trajectory(const Scene& scene) {
  const TrajectorySpec& ts = scene.spec().trajectory;
  std::vector<double> cumlen{0.0};
  for (std::size_t i = 1; i < ts.path.size(); ++i) {
    cumlen.push_back(cumlen.back() + (ts.path[i] - ts.path[i - 1]).norm());
  }
  const double total = cumlen.back();
  if (!(total > 0.0)) throw ConfigError("trajectory path has zero length");

  std::vector<Pose> poses;
  const double dt = 1.0 / ts.rate_hz;
  for (int k = 0;; ++k) {
    const double t = k * dt;
    const double s = ts.speed * t;
    if (s > total) break;
    std::size_t seg = 1;
    while (seg + 1 < cumlen.size() && s > cumlen[seg]) ++seg;
    const double seg_len = cumlen[seg] - cumlen[seg - 1];
    const double a = seg_len > 0.0 ? (s - cumlen[seg - 1]) / seg_len : 0.0;
    const Vec2 xy = ts.path[seg - 1] + a * (ts.path[seg] - ts.path[seg - 1]);
    const Vec2 dir = (ts.path[seg] - ts.path[seg - 1]).normalized();
    Pose pose;
    pose.timestamp = t;
    pose.translation = Vec3(xy.x(), xy.y(), scene.z(xy.x(), xy.y()));
    pose.rotation = Quat(Eigen::AngleAxisd(std::atan2(dir.y(), dir.x()), Vec3::UnitZ()));
    poses.push_back(pose);
  }
  return Trajectory(std::move(poses));
}

std::vector<PointXYZI> sample_point_map(const Scene& scene, double density, std::uint64_t seed,
                                        std::vector<std::uint8_t>* true_labels) {
  if (!(density > 0.0)) throw ConfigError("point density must be positive");
  const SceneSpec& spec = scene.spec();
  const double per_axis = std::sqrt(density);
  const int nx = std::max(1, static_cast<int>(std::llround(spec.extent_x * per_axis)));
  const int ny = std::max(1, static_cast<int>(std::llround(spec.extent_y * per_axis)));
  const double ax = spec.extent_x / nx;
  const double ay = spec.extent_y / ny;
  const double y_lo = -spec.extent_y / 2.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<PointXYZI> points;
  points.reserve(static_cast<std::size_t>(nx) * ny);
  if (true_labels) {
    true_labels->clear();
    true_labels->reserve(points.capacity());
  }
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const double x = (ix + unit(rng)) * ax;
      const double y = y_lo + (iy + unit(rng)) * ay;
      double mean, sd;
      scene.intensity_params(x, y, mean, sd);
      PointXYZI p;
      p.x = static_cast<float>(x);
      p.y = static_cast<float>(y);
      p.z = static_cast<float>(scene.z(x, y));
      p.intensity = static_cast<float>(std::clamp(mean + sd * gauss(rng), 0.0, 255.0));
      points.push_back(p);
      if (true_labels) true_labels->push_back(scene.label(x, y));
    }
  }
  return points;
}

namespace {

// Height of the ray point above the surface, as a function of ray parameter.
double height_above(const Scene& scene, const Vec3& origin, const Vec3& dir, double t) {
  const Vec3 p = origin + t * dir;
  return p.z() - scene.z(p.x(), p.y());
}

std::optional<double> find_hit(const Scene& scene, const Vec3& origin, const Vec3& dir) {
  const Surface& surface = scene.spec().surface;
  double lo = 0.0, hi = 0.0;
  if (surface.kind == Surface::Kind::kFlat || surface.kind == Surface::Kind::kIncline) {
    const double g = surface.kind == Surface::Kind::kIncline ? surface.grade : 0.0;
    const double denom = dir.z() - g * dir.x();
    if (denom == 0.0) return std::nullopt;
    const double t = (g * origin.x() - origin.z()) / denom;
    if (t <= 0.0 || t > kRayMax) return std::nullopt;
    lo = std::max(0.0, t - 0.5);
    hi = t + 0.5;
    if (height_above(scene, origin, dir, lo) <= 0.0) return std::nullopt;
  } else {
    // Conservative march: |d height / d t| is bounded by 1 plus the max
    // surface slope, so stepping by height/L cannot jump across a crossing.
    const double slope = surface.amplitude * 2.0 * M_PI / surface.wavelength;
    const double L = 1.0 + slope;
    double t = 0.0;
    double h = height_above(scene, origin, dir, t);
    if (h <= 0.0) return std::nullopt;
    bool bracketed = false;
    while (t < kRayMax) {
      const double step = std::max(h / L, 0.02);
      const double tn = t + step;
      const double hn = height_above(scene, origin, dir, tn);
      if (hn <= 0.0) {
        lo = t;
        hi = tn;
        bracketed = true;
        break;
      }
      t = tn;
      h = hn;
    }
    if (!bracketed) return std::nullopt;
  }

  for (int i = 0; i < kMaxBisect && hi - lo > kRayTol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (height_above(scene, origin, dir, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::optional<Vec3> cast_pixel_ray(const Scene& scene, const CameraModel& cam,
                                   const Pose& pose, double u, double v) {
  const Eigen::Isometry3d world_from_camera = pose.isometry() * cam.camera_from_body.inverse();
  const Vec3 origin = world_from_camera.translation();
  Vec3 dir = world_from_camera.linear() *
             Vec3((u - cam.cx) / cam.fx, (v - cam.cy) / cam.fy, 1.0);
  dir.normalize();
  const auto t = find_hit(scene, origin, dir);
  if (!t) return std::nullopt;
  return origin + *t * dir;
}

SemanticImage render_semantic_image(const Scene& scene, const CameraModel& cam,
                                    const Pose& pose) {
  SemanticImage img(cam.width, cam.height);
  const Eigen::Isometry3d world_from_camera = pose.isometry() * cam.camera_from_body.inverse();
  const Vec3 origin = world_from_camera.translation();
  const Eigen::Matrix3d rot = world_from_camera.linear();
  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      Vec3 dir = rot * Vec3((u - cam.cx) / cam.fx, (v - cam.cy) / cam.fy, 1.0);
      dir.normalize();
      const auto t = find_hit(scene, origin, dir);
      if (!t) continue;
      const Vec3 hit = origin + *t * dir;
      img.at(u, v) = scene.label(hit.x(), hit.y());
    }
  }
  return img;
}

SemanticImage corrupt_labels(const SemanticImage& img, const ObservationModel& model,
                             const LabelSet& labels, std::uint64_t seed) {
  if (model.channels() != LabelSet::kNumChannels) {
    throw ConfigError("corruption model must cover the map channels");
  }
  SemanticImage out = img;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    const std::uint8_t id = out.labels[i];
    if (id == LabelSet::kUnlabeled) continue;
    const auto channel = labels.channel_of(id);
    if (!channel) continue;
    const double u = unit(rng);
    double acc = 0.0;
    int drawn = LabelSet::kNumChannels - 1;
    for (int j = 0; j < LabelSet::kNumChannels; ++j) {
      acc += model.prob(*channel, j);
      if (u < acc) {
        drawn = j;
        break;
      }
    }
    out.labels[i] = labels.id_for_channel(drawn);
  }
  return out;
}

LabelRaster ground_truth_raster(const Scene& scene, const SemanticGrid& grid_template) {
  BEVMAP_CHECK(grid_template.frame() == GridFrame::kGlobal,
               "ground-truth raster wants a global grid");
  const LabelSet labels = LabelSet::default_set();
  LabelRaster raster;
  raster.height = grid_template.height();
  raster.width = grid_template.width();
  raster.labels.assign(static_cast<std::size_t>(raster.height) * raster.width,
                       LabelRaster::kUnknown);
  for (int r = 0; r < raster.height; ++r) {
    for (int c = 0; c < raster.width; ++c) {
      const Vec2 center = grid_template.cell_center(Cell{r, c});
      const std::uint8_t id = scene.label(center.x(), center.y());
      if (id == LabelSet::kUnlabeled) continue;
      const auto channel = labels.channel_of(id);
      if (channel) raster.at(r, c) = static_cast<std::uint8_t>(*channel);
    }
  }
  return raster;
}

std::vector<SemanticPoint> simulate_scan(const Scene& scene, const Pose& pose,
                                         const ScanConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::Isometry3d world_from_body = pose.isometry();
  const Eigen::Isometry3d body_from_world = world_from_body.inverse();
  const Vec3 origin = world_from_body * Vec3(0.0, 0.0, config.sensor_height);

  std::vector<SemanticPoint> points;
  for (int beam = 0; beam < 16; ++beam) {
    const double elev = (-15.0 + 2.0 * beam) * M_PI / 180.0;
    for (double az_deg = 0.0; az_deg < 360.0; az_deg += config.azimuth_step_deg) {
      const double az = az_deg * M_PI / 180.0;
      const Vec3 dir_body(std::cos(elev) * std::cos(az), std::cos(elev) * std::sin(az),
                          std::sin(elev));
      const Vec3 dir = world_from_body.linear() * dir_body;
      const auto t = find_hit(scene, origin, dir);
      if (!t || *t > config.max_range) continue;
      const Vec3 hit = origin + *t * dir;
      double mean, sd;
      scene.intensity_params(hit.x(), hit.y(), mean, sd);
      SemanticPoint p;
      p.position = body_from_world * hit;
      p.label = scene.label(hit.x(), hit.y());
      p.intensity = static_cast<float>(std::clamp(mean + sd * gauss(rng), 0.0, 255.0));
      points.push_back(p);
    }
  }
  return points;
}

using nlohmann::json;

namespace {

json region_to_json(const PaintRegion& r) {
  json j{{"channel", r.channel},
         {"intensity_mean", r.intensity_mean},
         {"intensity_sd", r.intensity_sd}};
  if (r.shape == PaintRegion::Shape::kBand) {
    j["band"] = {r.x_min, r.x_max, r.y_min, r.y_max};
  } else {
    json pts = json::array();
    for (const Vec2& p : r.polygon) pts.push_back({p.x(), p.y()});
    j["polygon"] = pts;
  }
  return j;
}

PaintRegion region_from_json(const json& j) {
  PaintRegion r;
  r.channel = j.at("channel").get<int>();
  r.intensity_mean = j.value("intensity_mean", 30.0);
  r.intensity_sd = j.value("intensity_sd", 8.0);
  if (j.contains("band")) {
    const auto b = j.at("band").get<std::vector<double>>();
    if (b.size() != 4) throw ConfigError("paint band must be [x_min, x_max, y_min, y_max]");
    r.shape = PaintRegion::Shape::kBand;
    r.x_min = b[0];
    r.x_max = b[1];
    r.y_min = b[2];
    r.y_max = b[3];
  } else if (j.contains("polygon")) {
    r.shape = PaintRegion::Shape::kPolygon;
    for (const auto& p : j.at("polygon")) {
      const auto v = p.get<std::vector<double>>();
      if (v.size() != 2) throw ConfigError("polygon vertices must be [x, y]");
      r.polygon.emplace_back(v[0], v[1]);
    }
  } else {
    throw ConfigError("paint region needs a 'band' or 'polygon'");
  }
  return r;
}

}  // namespace

nlohmann::json scene_to_json(const SceneSpec& spec) {
  json surface{{"kind", spec.surface.kind == Surface::Kind::kFlat      ? "flat"
                        : spec.surface.kind == Surface::Kind::kIncline ? "incline"
                                                                       : "hill"}};
  if (spec.surface.kind == Surface::Kind::kIncline) surface["grade"] = spec.surface.grade;
  if (spec.surface.kind == Surface::Kind::kHill) {
    surface["amplitude"] = spec.surface.amplitude;
    surface["wavelength"] = spec.surface.wavelength;
  }
  json layout = json::array();
  for (const PaintRegion& r : spec.layout) layout.push_back(region_to_json(r));
  json path = json::array();
  for (const Vec2& p : spec.trajectory.path) path.push_back({p.x(), p.y()});

  json j{
      {"extent", {spec.extent_x, spec.extent_y}},
      {"surface", surface},
      {"layout", layout},
      {"trajectory",
       {{"path", path}, {"speed", spec.trajectory.speed}, {"rate_hz", spec.trajectory.rate_hz}}},
      {"camera", camera_to_json(spec.camera)},
      {"seed", spec.seed},
      {"density", spec.density},
      {"background_intensity", {spec.background_intensity_mean, spec.background_intensity_sd}},
      {"grid_d", spec.grid_d},
      {"scans", spec.scans},
  };
  if (spec.corruption) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < spec.corruption->rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < spec.corruption->cols(); ++c) row.push_back((*spec.corruption)(r, c));
      rows.push_back(row);
    }
    j["corruption"] = rows;
  }
  return j;
}

SceneSpec scene_from_json(const nlohmann::json& j) {
  SceneSpec spec = default_scene();
  try {
    if (j.contains("extent")) {
      const auto e = j.at("extent").get<std::vector<double>>();
      if (e.size() != 2) throw ConfigError("extent must be [x, y]");
      spec.extent_x = e[0];
      spec.extent_y = e[1];
    }
    if (j.contains("surface")) {
      const json& s = j.at("surface");
      const std::string kind = s.value("kind", "flat");
      if (kind == "flat") {
        spec.surface = Surface{};
      } else if (kind == "incline") {
        spec.surface.kind = Surface::Kind::kIncline;
        spec.surface.grade = s.at("grade").get<double>();
      } else if (kind == "hill") {
        spec.surface.kind = Surface::Kind::kHill;
        spec.surface.amplitude = s.at("amplitude").get<double>();
        spec.surface.wavelength = s.at("wavelength").get<double>();
      } else {
        throw ConfigError("surface kind must be flat, incline, or hill");
      }
    }
    if (j.contains("layout")) {
      spec.layout.clear();
      for (const auto& r : j.at("layout")) spec.layout.push_back(region_from_json(r));
    }
    if (j.contains("trajectory")) {
      const json& t = j.at("trajectory");
      if (t.contains("path")) {
        spec.trajectory.path.clear();
        for (const auto& p : t.at("path")) {
          const auto v = p.get<std::vector<double>>();
          if (v.size() != 2) throw ConfigError("path vertices must be [x, y]");
          spec.trajectory.path.emplace_back(v[0], v[1]);
        }
      }
      spec.trajectory.speed = t.value("speed", spec.trajectory.speed);
      spec.trajectory.rate_hz = t.value("rate_hz", spec.trajectory.rate_hz);
    }
    if (j.contains("camera")) spec.camera = camera_from_json(j.at("camera"));
    spec.seed = j.value("seed", spec.seed);
    spec.density = j.value("density", spec.density);
    if (j.contains("background_intensity")) {
      const auto b = j.at("background_intensity").get<std::vector<double>>();
      if (b.size() != 2) throw ConfigError("background_intensity must be [mean, sd]");
      spec.background_intensity_mean = b[0];
      spec.background_intensity_sd = b[1];
    }
    spec.grid_d = j.value("grid_d", spec.grid_d);
    spec.scans = j.value("scans", spec.scans);
    if (j.contains("corruption")) {
      Eigen::MatrixXd m(LabelSet::kNumChannels, LabelSet::kNumChannels);
      const json& rows = j.at("corruption");
      if (rows.size() != LabelSet::kNumChannels) throw ConfigError("corruption must be 5x5");
      for (int r = 0; r < LabelSet::kNumChannels; ++r) {
        const auto row = rows[r].get<std::vector<double>>();
        if (row.size() != LabelSet::kNumChannels) throw ConfigError("corruption must be 5x5");
        for (int c = 0; c < LabelSet::kNumChannels; ++c) m(r, c) = row[c];
      }
      spec.corruption = m;
    }
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("bad scene json: ") + ex.what());
  }
  spec.validate();
  return spec;
}

SceneSpec scene_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw IoError(path + ": " + ex.what());
  }
  return scene_from_json(j);
}

}  // namespace bevmap
