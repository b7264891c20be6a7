#include "bevmap/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "bevmap/errors.hpp"
#include "bevmap/evaluation.hpp"
#include "bevmap/io/grid_io.hpp"
#include "bevmap/io/manifest_io.hpp"
#include "bevmap/io/ply_io.hpp"
#include "bevmap/io/png_io.hpp"
#include "bevmap/io/trajectory_io.hpp"

namespace bevmap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string resolve(const fs::path& dir, const std::string& p) {
  if (p.empty()) return p;
  fs::path path(p);
  if (path.is_relative()) path = dir / path;
  return path.string();
}

std::vector<double> get_pair(const json& j, const char* key) {
  const auto v = j.at(key).get<std::vector<double>>();
  if (v.size() != 2) throw ConfigError(std::string(key) + " must have two entries");
  return v;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw IoError(path + ": " + ex.what());
  }
  return j;
}

void dump_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

RunConfig run_config_from_json_file(const std::string& path) {
  const json j = load_json_file(path);
  const fs::path dir = fs::path(path).parent_path();
  RunConfig cfg;
  try {
    if (j.contains("inputs")) {
      const json& in = j.at("inputs");
      cfg.point_map_path = resolve(dir, in.value("point_map", ""));
      cfg.trajectory_path = resolve(dir, in.value("trajectory", ""));
      cfg.images_manifest_path = resolve(dir, in.value("images", ""));
      cfg.scans_manifest_path = resolve(dir, in.value("scans", ""));
      cfg.label_set_path = resolve(dir, in.value("labels", ""));
      cfg.confusion_path = resolve(dir, in.value("confusion", ""));
      if (in.contains("camera")) {
        if (in.at("camera").is_object()) {
          cfg.camera_inline = camera_from_json(in.at("camera"));
        } else {
          cfg.camera_path = resolve(dir, in.at("camera").get<std::string>());
        }
      }
    }
    if (j.contains("output")) cfg.output_base = resolve(dir, j.at("output").get<std::string>());

    const std::string model = j.value("model", "vanilla");
    if (model == "vanilla") {
      cfg.model = ModelKind::kVanilla;
    } else if (model == "cfn") {
      cfg.model = ModelKind::kCfn;
    } else {
      throw ConfigError("model must be 'vanilla' or 'cfn'");
    }
    cfg.lambda = j.value("lambda", cfg.lambda);
    cfg.eps_floor = j.value("epsilon_floor", cfg.eps_floor);

    BuildConfig& b = cfg.build;
    const std::string mode = j.value("mode", "dense");
    if (mode == "dense") {
      b.mode = MapMode::kDense;
    } else if (mode == "live") {
      b.mode = MapMode::kLive;
    } else if (mode == "planar") {
      b.mode = MapMode::kPlanar;
    } else {
      throw ConfigError("mode must be 'dense', 'live', or 'planar'");
    }
    b.d = j.value("d", b.d);
    b.use_intensity = j.value("intensity", b.use_intensity);
    b.intensity.gamma = j.value("gamma", b.intensity.gamma);
    b.intensity.threshold = j.value("k", b.intensity.threshold);
    b.intensity.target_channel = j.value("intensity_target_channel", b.intensity.target_channel);
    b.intensity.require_label = j.value("intensity_requires_label", b.intensity.require_label);
    if (j.contains("clip")) {
      const json& c = j.at("clip");
      if (c.contains("longitudinal")) {
        const auto v = get_pair(c, "longitudinal");
        b.clip.longitudinal_min = v[0];
        b.clip.longitudinal_max = v[1];
      }
      if (c.contains("lateral")) {
        const auto v = get_pair(c, "lateral");
        b.clip.lateral_min = v[0];
        b.clip.lateral_max = v[1];
      }
      if (c.contains("vertical")) {
        const auto v = get_pair(c, "vertical");
        b.clip.vertical_min = v[0];
        b.clip.vertical_max = v[1];
      }
    }
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      const std::string frame = g.value("frame", "global");
      if (frame == "global") {
        b.grid.frame = GridFrame::kGlobal;
      } else if (frame == "local") {
        b.grid.frame = GridFrame::kLocal;
      } else {
        throw ConfigError("grid frame must be 'local' or 'global'");
      }
      if (g.contains("from")) cfg.grid_from_path = resolve(dir, g.at("from").get<std::string>());
      if (g.contains("origin")) {
        const auto v = get_pair(g, "origin");
        b.grid.origin = {v[0], v[1]};
      }
      if (g.contains("size")) {
        const auto v = g.at("size").get<std::vector<int>>();
        if (v.size() != 2) throw ConfigError("grid size must be [H, W]");
        b.grid.size = {v[0], v[1]};
      }
    }
    if (j.contains("shift")) {
      b.shift_translation = j.at("shift").value("translation", b.shift_translation);
      b.shift_rotation = j.at("shift").value("rotation", b.shift_rotation);
    }
    if (j.contains("fill")) {
      b.fill_window = j.at("fill").value("window", b.fill_window);
      b.fill_min_votes = j.at("fill").value("min_votes", b.fill_min_votes);
    }
    b.occlusion = j.value("occlusion", b.occlusion);
    b.one_vote_per_cell = j.value("one_vote_per_cell", b.one_vote_per_cell);
    const std::string lookup = j.value("time_lookup", "interpolate");
    if (lookup == "interpolate") {
      b.lookup = TimeLookup::kInterpolate;
    } else if (lookup == "nearest") {
      b.lookup = TimeLookup::kNearest;
    } else {
      throw ConfigError("time_lookup must be 'interpolate' or 'nearest'");
    }
    if (j.contains("planar")) {
      const json& p = j.at("planar");
      b.plane.height = p.value("height", b.plane.height);
      b.plane.valid_range = p.value("valid_range", b.plane.valid_range);
      b.planar_stride = p.value("stride", b.planar_stride);
    }
  } catch (const json::exception& ex) {
    throw ConfigError(path + ": " + ex.what());
  }
  if (!(cfg.build.d > 0.0)) throw ConfigError("d must be positive");
  return cfg;
}

ObservationModel observation_model_from_file(const std::string& path, double eps_floor) {
  const json j = load_json_file(path);
  json rows;
  bool counts = false;
  if (j.is_array()) {
    rows = j;
    counts = true;
  } else if (j.contains("counts")) {
    rows = j.at("counts");
    counts = true;
  } else if (j.contains("rows")) {
    rows = j.at("rows");
  } else {
    throw IoError(path + ": expected 'counts', 'rows', or a bare matrix");
  }
  if (rows.size() != LabelSet::kNumChannels) {
    throw IoError(path + ": matrix must have " + std::to_string(LabelSet::kNumChannels) +
                  " rows");
  }
  Eigen::MatrixXd m(LabelSet::kNumChannels, LabelSet::kNumChannels);
  try {
    for (int r = 0; r < LabelSet::kNumChannels; ++r) {
      const auto row = rows[r].get<std::vector<double>>();
      if (row.size() != LabelSet::kNumChannels) {
        throw IoError(path + ": matrix rows must have " +
                      std::to_string(LabelSet::kNumChannels) + " entries");
      }
      for (int c = 0; c < LabelSet::kNumChannels; ++c) m(r, c) = row[c];
    }
  } catch (const json::exception& ex) {
    throw IoError(path + ": " + ex.what());
  }
  return counts ? ObservationModel::from_confusion(m, eps_floor)
                : ObservationModel::from_rows(m, eps_floor);
}

namespace {

std::vector<SemanticPoint> scan_points_from_file(const std::string& path) {
  std::vector<SemanticPoint> out;
  for (const PointXYZI& p : read_point_file(path)) {
    SemanticPoint sp;
    sp.position = p.position();
    sp.intensity = p.intensity;
    out.push_back(sp);
  }
  return out;
}

}  // namespace

BuildSummary run_build(const RunConfig& config) {
  const LabelSet labels = config.label_set_path.empty()
                              ? LabelSet::default_set()
                              : LabelSet::load_json(config.label_set_path);

  CameraModel cam;
  if (config.camera_inline) {
    cam = *config.camera_inline;
  } else if (!config.camera_path.empty()) {
    cam = camera_from_json_file(config.camera_path);
  } else {
    throw ConfigError("no camera given");
  }

  if (config.trajectory_path.empty()) throw ConfigError("no trajectory given");
  const Trajectory traj = read_trajectory(config.trajectory_path);

  if (config.images_manifest_path.empty()) throw ConfigError("no images manifest given");
  const std::vector<ManifestEntry> image_entries = read_manifest(config.images_manifest_path);

  std::vector<FrameInput> frames;
  frames.reserve(image_entries.size());
  for (const ManifestEntry& e : image_entries) {
    FrameInput f;
    f.timestamp = e.timestamp;
    f.image = read_gray_png(e.path);
    if (!labels_valid(f.image, labels)) {
      throw IoError(e.path + ": pixel values outside the label set");
    }
    frames.push_back(std::move(f));
  }

  if (config.build.mode == MapMode::kLive) {
    if (config.scans_manifest_path.empty()) throw ConfigError("live mode needs a scans manifest");
    const std::vector<ManifestEntry> scan_entries = read_manifest(config.scans_manifest_path);
    for (FrameInput& f : frames) {
      const ManifestEntry* best = nullptr;
      double best_dt = std::numeric_limits<double>::max();
      for (const ManifestEntry& s : scan_entries) {
        const double dt = std::abs(s.timestamp - f.timestamp);
        if (dt < best_dt) {
          best_dt = dt;
          best = &s;
        }
      }
      if (best) f.scan = scan_points_from_file(best->path);
    }
  }

  BuildConfig build = config.build;
  if (!config.grid_from_path.empty()) {
    build.grid.from = load_grid_meta(config.grid_from_path);
    build.d = build.grid.from->d;
  }

  std::optional<PointMap> map;
  if (build.mode == MapMode::kDense) {
    if (config.point_map_path.empty()) throw ConfigError("dense mode needs a point map");
    map.emplace(read_point_file(config.point_map_path));
  }

  ObservationModel model = ObservationModel::vanilla(config.lambda, LabelSet::kNumChannels,
                                                     config.eps_floor);
  if (config.model == ModelKind::kCfn) {
    if (config.confusion_path.empty()) throw ConfigError("cfn model needs a confusion matrix");
    model = observation_model_from_file(config.confusion_path, config.eps_floor);
  }

  BuildResult result = build_map(map ? &*map : nullptr, traj, cam, labels, model,
                                 std::move(frames), build);

  const fs::path out_dir = fs::path(config.output_base).parent_path();
  if (!out_dir.empty()) fs::create_directories(out_dir);

  save_grid(config.output_base, result.grid, labels);
  write_label_raster_png(config.output_base + "_labels.png", result.raw_labels);
  write_label_raster_png(config.output_base + "_labels_filled.png", result.filled_labels);
  write_rgb_png(config.output_base + "_labels_rgb.png",
                render_label_raster(result.raw_labels, labels));
  write_rgb_png(config.output_base + "_labels_filled_rgb.png",
                render_label_raster(result.filled_labels, labels));

  json summary{
      {"mode", config.build.mode == MapMode::kDense   ? "dense"
               : config.build.mode == MapMode::kLive ? "live"
                                                     : "planar"},
      {"model", config.model == ModelKind::kVanilla ? "vanilla" : "cfn"},
      {"intensity", config.build.use_intensity},
      {"frames_total", result.frames_total},
      {"frames_used", result.frames_used},
      {"frames_skipped", result.skipped_timestamps.size()},
      {"skipped_timestamps", result.skipped_timestamps},
      {"points_integrated", result.points_integrated},
  };
  dump_json_file(config.output_base + "_summary.json", summary);

  return BuildSummary{std::move(result), config.output_base};
}

void run_synth(const SceneSpec& spec, const std::string& out_dir) {
  spec.validate();
  const Scene scene(spec);
  const fs::path out(out_dir);
  fs::create_directories(out / "images_gt");
  fs::create_directories(out / "images");
  if (spec.scans) fs::create_directories(out / "scans");

  dump_json_file((out / "scene.json").string(), scene_to_json(spec));

  const LabelSet labels = LabelSet::default_set();
  labels.save_json((out / "labels.json").string());
  camera_to_json_file((out / "camera.json").string(), spec.camera);

  const Trajectory traj = make_trajectory(scene);
  write_trajectory((out / "trajectory.txt").string(), traj);

  std::vector<std::uint8_t> true_labels;
  const std::vector<PointXYZI> map_points =
      sample_point_map(scene, spec.density, spec.seed, &true_labels);
  write_ply((out / "map.ply").string(), map_points, true);
  write_label_sidecar((out / "map_labels.bin").string(), true_labels);

  // ground-truth raster over the painted extent
  const int gt_w = static_cast<int>(std::llround(spec.extent_x / spec.grid_d));
  const int gt_h = static_cast<int>(std::llround(spec.extent_y / spec.grid_d));
  SemanticGrid gt_template =
      SemanticGrid::global(0.0, -spec.extent_y / 2.0, gt_h, gt_w, spec.grid_d);
  const LabelRaster gt = ground_truth_raster(scene, gt_template);
  save_grid_meta((out / "gt.json").string(), gt_template, labels);
  write_label_raster_png((out / "gt_labels.png").string(), gt);
  write_rgb_png((out / "gt_labels_rgb.png").string(), render_label_raster(gt, labels));

  std::optional<ObservationModel> corruption;
  if (spec.corruption) {
    corruption = ObservationModel::from_rows(*spec.corruption);
    json rows = json::array();
    for (int r = 0; r < LabelSet::kNumChannels; ++r) {
      json row = json::array();
      for (int c = 0; c < LabelSet::kNumChannels; ++c) row.push_back((*spec.corruption)(r, c));
      rows.push_back(row);
    }
    dump_json_file((out / "confusion.json").string(), json{{"rows", rows}});
  }

  std::vector<ManifestEntry> manifest_gt, manifest;
  int index = 0;
  for (const Pose& pose : traj.poses()) {
    char name[64];
    std::snprintf(name, sizeof(name), "frame_%06d.png", index);
    const SemanticImage gt_img = render_semantic_image(scene, spec.camera, pose);
    const std::string gt_rel = std::string("images_gt/") + name;
    write_gray_png((out / gt_rel).string(), gt_img);
    manifest_gt.push_back({pose.timestamp, gt_rel});

    const std::uint64_t frame_seed =
        spec.seed ^ (static_cast<std::uint64_t>(index + 1) * 0x9E3779B97F4A7C15ULL);
    const SemanticImage obs_img =
        corruption ? corrupt_labels(gt_img, *corruption, labels, frame_seed) : gt_img;
    const std::string rel = std::string("images/") + name;
    write_gray_png((out / rel).string(), obs_img);
    manifest.push_back({pose.timestamp, rel});

    if (spec.scans) {
      const std::uint64_t scan_seed = frame_seed ^ 0x5DEECE66DULL;
      const std::vector<SemanticPoint> scan =
          simulate_scan(scene, pose, ScanConfig{}, scan_seed);
      std::vector<PointXYZI> pts;
      std::vector<std::uint8_t> scan_labels;
      pts.reserve(scan.size());
      for (const SemanticPoint& sp : scan) {
        PointXYZI p;
        p.x = static_cast<float>(sp.position.x());
        p.y = static_cast<float>(sp.position.y());
        p.z = static_cast<float>(sp.position.z());
        p.intensity = sp.intensity;
        pts.push_back(p);
        scan_labels.push_back(sp.label);
      }
      char scan_name[64];
      std::snprintf(scan_name, sizeof(scan_name), "scan_%06d.ply", index);
      write_ply((out / "scans" / scan_name).string(), pts, true);
      std::snprintf(scan_name, sizeof(scan_name), "scan_%06d_labels.bin", index);
      write_label_sidecar((out / "scans" / scan_name).string(), scan_labels);
    }
    ++index;
  }
  write_manifest((out / "manifest_gt.json").string(), manifest_gt);
  write_manifest((out / "manifest.json").string(), manifest);
  if (spec.scans) {
    std::vector<ManifestEntry> scans_manifest;
    for (int k = 0; k < index; ++k) {
      char name[64];
      std::snprintf(name, sizeof(name), "scans/scan_%06d.ply", k);
      scans_manifest.push_back({traj.poses()[k].timestamp, name});
    }
    write_manifest((out / "scans_manifest.json").string(), scans_manifest);
  }
}

std::string run_eval(const EvalRequest& request) {
  const LabelRaster pred = read_label_raster_png(request.pred_path);
  const LabelRaster gt = read_label_raster_png(request.gt_path);

  if (!request.pred_meta_path.empty() && !request.gt_meta_path.empty()) {
    const GridMeta a = load_grid_meta(request.pred_meta_path);
    const GridMeta b = load_grid_meta(request.gt_meta_path);
    if (a.frame != b.frame || a.height != b.height || a.width != b.width ||
        std::abs(a.d - b.d) > 1e-12 || std::abs(a.x0 - b.x0) > 1e-9 ||
        std::abs(a.y0 - b.y0) > 1e-9) {
      throw ConfigError("prediction and ground-truth grid specs do not match");
    }
  }

  const LabelSet labels = LabelSet::default_set();
  const EvalReport report = evaluate(pred, gt, request.classes);
  if (!request.out_json_path.empty()) {
    dump_json_file(request.out_json_path, report_to_json(report, labels));
  }
  return report_to_table(report, labels);
}

void run_render(const std::string& raster_png, const std::string& label_set_path,
                const std::string& meta_path, const std::string& out_png) {
  const LabelRaster raster = read_label_raster_png(raster_png);
  const LabelSet labels =
      label_set_path.empty() ? LabelSet::default_set() : LabelSet::load_json(label_set_path);
  if (!meta_path.empty()) {
    const GridMeta meta = load_grid_meta(meta_path);
    if (meta.height != raster.height || meta.width != raster.width) {
      throw ConfigError("raster size does not match the grid sidecar");
    }
  }
  for (std::uint8_t v : raster.labels) {
    if (v != LabelRaster::kUnknown && v >= LabelSet::kNumChannels) {
      throw IoError(raster_png + ": value " + std::to_string(v) + " is not a channel index");
    }
  }
  write_rgb_png(out_png, render_label_raster(raster, labels));
}

}  // namespace bevmap
