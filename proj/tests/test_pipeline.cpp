#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bevmap/config.hpp"
#include "bevmap/errors.hpp"
#include "bevmap/evaluation.hpp"
#include "bevmap/io/grid_io.hpp"
#include "bevmap/io/png_io.hpp"

using namespace bevmap;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& leaf) const { return (path / leaf).string(); }
};

PaintRegion band(double x0, double x1, double y0, double y1, int channel) {
  PaintRegion r;
  r.x_min = x0;
  r.x_max = x1;
  r.y_min = y0;
  r.y_max = y1;
  r.channel = channel;
  return r;
}

// A small flat strip: road flanked by sidewalks, straight drive along it.
SceneSpec mini_scene() {
  SceneSpec s = default_scene();
  s.extent_x = 24.0;
  s.extent_y = 12.0;
  s.layout.clear();
  s.layout.push_back(band(0.0, 24.0, -6.0, -3.0, 4));
  s.layout.push_back(band(0.0, 24.0, 3.0, 6.0, 4));
  s.layout.push_back(band(0.0, 24.0, -3.0, 3.0, 0));
  s.surface = Surface{};
  s.trajectory.path = {{-10.0, 0.0}, {26.0, 0.0}};
  s.trajectory.speed = 5.0;
  s.trajectory.rate_hz = 4.0;
  s.camera.fx = 140.0;
  s.camera.fy = 140.0;
  s.camera.cx = 96.0;
  s.camera.cy = 72.0;
  s.camera.width = 192;
  s.camera.height = 144;
  s.density = 400.0;
  s.seed = 7;
  s.corruption.reset();
  s.scans = false;
  return s;
}

struct MiniData {
  SceneSpec spec;
  Scene scene;
  Trajectory traj;
  PointMap map;
  std::vector<FrameInput> frames;
  LabelRaster gt;
  SemanticGrid grid_template;
};

const MiniData& mini_data() {
  static const MiniData data = [] {
    SceneSpec spec = mini_scene();
    Scene scene(spec);
    Trajectory traj = make_trajectory(scene);
    PointMap map(sample_point_map(scene, spec.density, spec.seed));
    std::vector<FrameInput> frames;
    for (const Pose& pose : traj.poses()) {
      FrameInput f;
      f.timestamp = pose.timestamp;
      f.image = render_semantic_image(scene, spec.camera, pose);
      frames.push_back(std::move(f));
    }
    SemanticGrid grid_template = SemanticGrid::global(0.0, -6.0, 60, 120, 0.2);
    LabelRaster gt = ground_truth_raster(scene, grid_template);
    return MiniData{std::move(spec), std::move(scene),  std::move(traj), std::move(map),
                    std::move(frames), std::move(gt), std::move(grid_template)};
  }();
  return data;
}

BuildConfig mini_build_config() {
  BuildConfig cfg;
  cfg.mode = MapMode::kDense;
  cfg.d = 0.2;
  cfg.grid.frame = GridFrame::kGlobal;
  cfg.grid.origin = {0.0, -6.0};
  cfg.grid.size = {60, 120};
  cfg.use_intensity = false;
  return cfg;
}

double float_cast(double v) { return static_cast<double>(static_cast<float>(v)); }

}  // namespace

TEST_CASE("grid artifacts round trip through disk at float precision") {
  TempDir tmp("bevmap_grid_rt");
  const LabelSet labels = LabelSet::default_set();
  const ObservationModel model = ObservationModel::vanilla(0.3, LabelSet::kNumChannels);

  SemanticGrid grid = SemanticGrid::global(-1.5, 2.0, 7, 9, 0.25);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> channel(0, 4);
  std::uniform_int_distribution<int> count(0, 5);
  for (int r = 0; r < 7; ++r) {
    for (int c = 0; c < 9; ++c) {
      const int n = count(rng);
      for (int k = 0; k < n; ++k) grid.update(Cell{r, c}, channel(rng), model);
    }
  }
  grid.boost_intensity(Cell{3, 4}, 2, 200.0, IntensityModel{});

  const std::string base = tmp / "g";
  save_grid(base, grid, labels);
  const SemanticGrid loaded = load_grid(base);

  REQUIRE(loaded.height() == 7);
  REQUIRE(loaded.width() == 9);
  CHECK(loaded.frame() == GridFrame::kGlobal);
  const std::vector<double>& got = loaded.raw_logprob();
  const std::vector<double>& want = grid.raw_logprob();
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i] == float_cast(want[i]));
  }
  CHECK(loaded.raw_observed() == grid.raw_observed());

  // near-ties can collapse at float precision, so the label oracle is the
  // argmax over the float-cast values, ties to the lowest channel
  const LabelRaster relabeled = loaded.extract_label_map();
  for (int r = 0; r < 7; ++r) {
    for (int col = 0; col < 9; ++col) {
      if (!grid.raw_observed()[static_cast<std::size_t>(r) * 9 + col]) {
        CHECK(relabeled.at(r, col) == LabelRaster::kUnknown);
        continue;
      }
      int best = 0;
      float best_v = -std::numeric_limits<float>::infinity();
      for (int c = 0; c < 5; ++c) {
        const float v = static_cast<float>(want[(static_cast<std::size_t>(r) * 9 + col) * 5 + c]);
        if (v > best_v) {
          best_v = v;
          best = c;
        }
      }
      CHECK(relabeled.at(r, col) == best);
    }
  }

  const GridMeta meta = load_grid_meta(base + ".json");
  CHECK(meta.frame == GridFrame::kGlobal);
  CHECK(meta.height == 7);
  CHECK(meta.width == 9);
  CHECK(meta.d == doctest::Approx(0.25));
  CHECK(meta.x0 == doctest::Approx(-1.5));
  CHECK(meta.y0 == doctest::Approx(2.0));
  REQUIRE(meta.channel_names.size() == 5);
  CHECK(meta.channel_names[0] == "road");
  CHECK(meta.channel_names[2] == "lane_mark");

  SemanticGrid blank = grid_like(meta);
  CHECK(blank.height() == 7);
  CHECK(blank.width() == 9);
  CHECK(blank.extract_label_map().labels ==
        std::vector<std::uint8_t>(7 * 9, LabelRaster::kUnknown));
}

TEST_CASE("local grid sidecars keep the anchor pose") {
  TempDir tmp("bevmap_grid_anchor");
  Pose anchor;
  anchor.timestamp = 1.25;
  anchor.translation = Vec3(3.0, -2.0, 0.4);
  anchor.rotation = Eigen::Quaterniond(Eigen::AngleAxisd(0.7, Vec3::UnitZ()));
  SemanticGrid grid = SemanticGrid::local(anchor, -1.0, -4.0, 10, 12, 0.5);
  grid.update(Cell{2, 3}, 1, ObservationModel::vanilla(0.1, LabelSet::kNumChannels));

  const std::string base = tmp / "local";
  save_grid(base, grid, LabelSet::default_set());

  const GridMeta meta = load_grid_meta(base + ".json");
  CHECK(meta.frame == GridFrame::kLocal);
  CHECK((meta.anchor.translation - anchor.translation).norm() < 1e-12);
  CHECK(meta.anchor.rotation.angularDistance(anchor.rotation) < 1e-12);

  const SemanticGrid loaded = load_grid(base);
  CHECK(loaded.frame() == GridFrame::kLocal);
  CHECK((loaded.anchor().translation - anchor.translation).norm() < 1e-12);
  CHECK(loaded.extract_label_map().at(2, 3) == 1);
}

TEST_CASE("label rasters and their renders round trip") {
  TempDir tmp("bevmap_raster_rt");
  LabelRaster raster;
  raster.height = 3;
  raster.width = 4;
  raster.labels = {0, 1, 2, 3, 4, 255, 0, 255, 1, 2, 255, 3};

  const std::string png = tmp / "raster.png";
  write_label_raster_png(png, raster);
  const LabelRaster back = read_label_raster_png(png);
  CHECK(back.height == 3);
  CHECK(back.width == 4);
  CHECK(back.labels == raster.labels);

  const LabelSet labels = LabelSet::default_set();
  const RgbImage rgb = render_label_raster(raster, labels);
  REQUIRE(rgb.width == 4);
  REQUIRE(rgb.height == 3);
  auto px = [&](int r, int c, int ch) { return rgb.data[(r * 4 + c) * 3 + ch]; };
  const auto road = labels.channel_color(0);
  CHECK(px(0, 0, 0) == road[0]);
  CHECK(px(0, 0, 1) == road[1]);
  CHECK(px(0, 0, 2) == road[2]);
  const auto lane = labels.channel_color(2);
  CHECK(px(0, 2, 0) == lane[0]);
  // unknown renders as black
  CHECK(px(1, 1, 0) == 0);
  CHECK(px(1, 1, 1) == 0);
  CHECK(px(1, 1, 2) == 0);
}

TEST_CASE("a dense build reproduces the painted scene") {
  const MiniData& data = mini_data();
  const ObservationModel model = ObservationModel::vanilla(0.1, LabelSet::kNumChannels);
  const BuildConfig cfg = mini_build_config();

  const BuildResult result = build_map(&data.map, data.traj, data.spec.camera,
                                       LabelSet::default_set(), model, data.frames, cfg);

  CHECK(result.frames_total == static_cast<int>(data.frames.size()));
  CHECK(result.frames_used == result.frames_total);
  CHECK(result.skipped_timestamps.empty());
  CHECK(result.points_integrated > 10000u);

  const EvalReport report = evaluate(result.filled_labels, data.gt, {0, 4});
  REQUIRE(report.miou.has_value());
  CHECK(*report.miou > 0.95);
}

TEST_CASE("frames outside the trajectory are skipped and reported") {
  const MiniData& data = mini_data();

  std::vector<FrameInput> frames(data.frames.begin(), data.frames.begin() + 3);
  FrameInput before;
  before.timestamp = -5.0;
  before.image = data.frames.front().image;
  FrameInput after;
  after.timestamp = 1e6;
  after.image = data.frames.front().image;
  frames.push_back(before);
  frames.push_back(after);

  const BuildResult result =
      build_map(&data.map, data.traj, data.spec.camera, LabelSet::default_set(),
                ObservationModel::vanilla(0.1, LabelSet::kNumChannels), frames, mini_build_config());
  CHECK(result.frames_total == 5);
  CHECK(result.frames_used == 3);
  REQUIRE(result.skipped_timestamps.size() == 2);
  CHECK(result.skipped_timestamps.front() == doctest::Approx(-5.0));
  CHECK(result.skipped_timestamps.back() == doctest::Approx(1e6));
}

TEST_CASE("a build with no usable frames still yields the configured grid") {
  const MiniData& data = mini_data();

  const BuildResult result =
      build_map(&data.map, data.traj, data.spec.camera, LabelSet::default_set(),
                ObservationModel::vanilla(0.1, LabelSet::kNumChannels), {}, mini_build_config());
  CHECK(result.frames_total == 0);
  CHECK(result.frames_used == 0);
  CHECK(result.grid.height() == 60);
  CHECK(result.grid.width() == 120);
  CHECK(result.raw_labels.labels ==
        std::vector<std::uint8_t>(60 * 120, LabelRaster::kUnknown));
}

TEST_CASE("dense mode without a point map is a config error") {
  const MiniData& data = mini_data();
  CHECK_THROWS_AS(build_map(nullptr, data.traj, data.spec.camera, LabelSet::default_set(),
                            ObservationModel::vanilla(0.1, LabelSet::kNumChannels), data.frames, mini_build_config()),
                  ConfigError);
}

TEST_CASE("the observation model changes posteriors but not coverage") {
  const MiniData& data = mini_data();
  const BuildConfig cfg = mini_build_config();

  const BuildResult vanilla = build_map(&data.map, data.traj, data.spec.camera,
                                        LabelSet::default_set(),
                                        ObservationModel::vanilla(0.1, LabelSet::kNumChannels), data.frames, cfg);

  Eigen::MatrixXd rows(5, 5);
  rows.setConstant(0.05);
  for (int r = 0; r < 5; ++r) rows(r, r) = 0.8;
  const BuildResult cfn = build_map(&data.map, data.traj, data.spec.camera,
                                    LabelSet::default_set(),
                                    ObservationModel::from_rows(rows), data.frames, cfg);

  CHECK(vanilla.points_integrated == cfn.points_integrated);
  CHECK(vanilla.frames_used == cfn.frames_used);
  CHECK(vanilla.grid.raw_observed() == cfn.grid.raw_observed());
}

TEST_CASE("a local build re-anchors near the end of the drive") {
  const MiniData& data = mini_data();
  BuildConfig cfg;
  cfg.mode = MapMode::kDense;
  cfg.d = 0.2;
  cfg.grid.frame = GridFrame::kLocal;
  cfg.use_intensity = false;
  // window straddling the vehicle, so paint stays in view at the far end
  cfg.clip.longitudinal_min = -8.0;
  cfg.clip.longitudinal_max = 7.0;

  const BuildResult result = build_map(&data.map, data.traj, data.spec.camera,
                                       LabelSet::default_set(),
                                       ObservationModel::vanilla(0.1, LabelSet::kNumChannels), data.frames, cfg);
  CHECK(result.grid.frame() == GridFrame::kLocal);
  CHECK(result.frames_used == result.frames_total);
  // the window followed the vehicle from x = -10 toward x = 26
  CHECK(result.grid.anchor().translation.x() > 20.0);

  int road_cells = 0;
  for (std::uint8_t v : result.raw_labels.labels) {
    if (v == 0) ++road_cells;
  }
  CHECK(road_cells > 100);
}

TEST_CASE("run configs load from json with paths resolved against the file") {
  TempDir tmp("bevmap_runcfg");
  {
    std::ofstream out(tmp / "run.json");
    out << R"({
      "inputs": {
        "point_map": "map.ply",
        "trajectory": "traj.txt",
        "images": "manifest.json",
        "camera": "cam.json",
        "confusion": "conf.json"
      },
      "output": "out/map",
      "model": "cfn",
      "lambda": 0.4,
      "epsilon_floor": 1e-5,
      "mode": "planar",
      "d": 0.1,
      "intensity": true,
      "gamma": 0.7,
      "k": 20.0,
      "clip": {"longitudinal": [-2.0, 30.0], "vertical": [-4.0, 2.0]},
      "grid": {"frame": "local", "origin": [-5.0, -10.0], "size": [80, 120]},
      "shift": {"translation": 2.5, "rotation": 0.5},
      "fill": {"window": 5, "min_votes": 2},
      "occlusion": true,
      "one_vote_per_cell": true,
      "time_lookup": "nearest",
      "planar": {"height": -1.7, "valid_range": 25.0, "stride": 3}
    })";
  }

  const RunConfig cfg = run_config_from_json_file(tmp / "run.json");
  CHECK(cfg.point_map_path == tmp / "map.ply");
  CHECK(cfg.trajectory_path == tmp / "traj.txt");
  CHECK(cfg.images_manifest_path == tmp / "manifest.json");
  CHECK(cfg.camera_path == tmp / "cam.json");
  CHECK(cfg.confusion_path == tmp / "conf.json");
  CHECK(cfg.output_base == tmp / "out/map");
  CHECK(cfg.model == ModelKind::kCfn);
  CHECK(cfg.lambda == doctest::Approx(0.4));
  CHECK(cfg.eps_floor == doctest::Approx(1e-5));
  CHECK(cfg.build.mode == MapMode::kPlanar);
  CHECK(cfg.build.d == doctest::Approx(0.1));
  CHECK(cfg.build.use_intensity);
  CHECK(cfg.build.intensity.gamma == doctest::Approx(0.7));
  CHECK(cfg.build.intensity.threshold == doctest::Approx(20.0));
  CHECK(cfg.build.clip.longitudinal_min == doctest::Approx(-2.0));
  CHECK(cfg.build.clip.longitudinal_max == doctest::Approx(30.0));
  CHECK(cfg.build.clip.vertical_min == doctest::Approx(-4.0));
  CHECK(cfg.build.grid.frame == GridFrame::kLocal);
  REQUIRE(cfg.build.grid.origin.has_value());
  CHECK((*cfg.build.grid.origin)[0] == doctest::Approx(-5.0));
  REQUIRE(cfg.build.grid.size.has_value());
  CHECK((*cfg.build.grid.size)[0] == 80);
  CHECK((*cfg.build.grid.size)[1] == 120);
  CHECK(cfg.build.shift_translation == doctest::Approx(2.5));
  CHECK(cfg.build.shift_rotation == doctest::Approx(0.5));
  CHECK(cfg.build.fill_window == 5);
  CHECK(cfg.build.fill_min_votes == 2);
  CHECK(cfg.build.occlusion);
  CHECK(cfg.build.one_vote_per_cell);
  CHECK(cfg.build.lookup == TimeLookup::kNearest);
  CHECK(cfg.build.plane.height == doctest::Approx(-1.7));
  CHECK(cfg.build.plane.valid_range == doctest::Approx(25.0));
  CHECK(cfg.build.planar_stride == 3);

  SUBCASE("bad values are config errors") {
    {
      std::ofstream out(tmp / "bad_model.json");
      out << R"({"model": "deep"})";
    }
    CHECK_THROWS_AS(run_config_from_json_file(tmp / "bad_model.json"), ConfigError);
    {
      std::ofstream out(tmp / "bad_size.json");
      out << R"({"grid": {"size": [3]}})";
    }
    CHECK_THROWS_AS(run_config_from_json_file(tmp / "bad_size.json"), ConfigError);
    {
      std::ofstream out(tmp / "bad_d.json");
      out << R"({"d": -0.5})";
    }
    CHECK_THROWS_AS(run_config_from_json_file(tmp / "bad_d.json"), ConfigError);
  }

  SUBCASE("missing or malformed files are io errors") {
    CHECK_THROWS_AS(run_config_from_json_file(tmp / "nope.json"), IoError);
    {
      std::ofstream out(tmp / "garbage.json");
      out << "not json at all {";
    }
    CHECK_THROWS_AS(run_config_from_json_file(tmp / "garbage.json"), IoError);
  }
}

TEST_CASE("observation model files accept counts, rows, and bare matrices") {
  TempDir tmp("bevmap_model_files");

  {
    std::ofstream out(tmp / "counts.json");
    out << R"({"counts": [
      [90, 10, 0, 0, 0],
      [0, 100, 0, 0, 0],
      [0, 0, 100, 0, 0],
      [0, 0, 0, 100, 0],
      [0, 0, 0, 0, 100]
    ]})";
  }
  const ObservationModel counts = observation_model_from_file(tmp / "counts.json", 1e-6);
  CHECK(counts.matrix()(0, 0) == doctest::Approx(0.9).epsilon(1e-4));
  CHECK(counts.matrix()(0, 1) == doctest::Approx(0.1).epsilon(1e-4));

  {
    std::ofstream out(tmp / "rows.json");
    out << R"({"rows": [
      [0.7, 0.3, 0, 0, 0],
      [0.1, 0.9, 0, 0, 0],
      [0, 0, 1, 0, 0],
      [0, 0, 0, 1, 0],
      [0, 0, 0, 0, 1]
    ]})";
  }
  const ObservationModel rows = observation_model_from_file(tmp / "rows.json", 1e-6);
  CHECK(rows.matrix()(0, 0) == doctest::Approx(0.7).epsilon(1e-4));
  CHECK(rows.matrix()(1, 0) == doctest::Approx(0.1).epsilon(1e-4));
  CHECK(rows.matrix()(2, 0) > 0.0);  // floored, never exactly zero

  {
    std::ofstream out(tmp / "bare.json");
    out << R"([[1,0,0,0,0],[0,1,0,0,0],[0,0,1,0,0],[0,0,0,1,0],[0,0,0,0,1]])";
  }
  const ObservationModel bare = observation_model_from_file(tmp / "bare.json", 1e-6);
  CHECK(bare.matrix()(3, 3) > 0.999);

  {
    std::ofstream out(tmp / "zero_row.json");
    out << R"({"counts": [[1,0,0,0,0],[0,0,0,0,0],[0,0,1,0,0],[0,0,0,1,0],[0,0,0,0,1]]})";
  }
  CHECK_THROWS_AS(observation_model_from_file(tmp / "zero_row.json", 1e-6), ConfigError);

  {
    std::ofstream out(tmp / "short_row.json");
    out << R"({"rows": [[1,0,0,0],[0,1,0,0,0],[0,0,1,0,0],[0,0,0,1,0],[0,0,0,0,1]]})";
  }
  CHECK_THROWS_AS(observation_model_from_file(tmp / "short_row.json", 1e-6), IoError);
  CHECK_THROWS_AS(observation_model_from_file(tmp / "missing.json", 1e-6), IoError);
}

TEST_CASE("a synthetic dataset drives the file-level build, eval, and render") {
  TempDir tmp("bevmap_endtoend");
  SceneSpec spec = mini_scene();
  spec.scans = true;
  run_synth(spec, tmp / "data");

  for (const char* name : {"scene.json", "labels.json", "camera.json", "trajectory.txt",
                           "map.ply", "map_labels.bin", "gt.json", "gt_labels.png",
                           "gt_labels_rgb.png", "manifest.json", "manifest_gt.json",
                           "scans_manifest.json"}) {
    CHECK_MESSAGE(fs::exists(fs::path(tmp / "data") / name), name);
  }
  CHECK(fs::exists(fs::path(tmp / "data") / "images" / "frame_000000.png"));
  CHECK(fs::exists(fs::path(tmp / "data") / "scans" / "scan_000000.ply"));

  {
    std::ofstream out(tmp / "run.json");
    out << R"({
      "inputs": {
        "point_map": "data/map.ply",
        "trajectory": "data/trajectory.txt",
        "images": "data/manifest.json",
        "camera": "data/camera.json",
        "labels": "data/labels.json"
      },
      "output": "out/map",
      "model": "vanilla",
      "lambda": 0.1,
      "mode": "dense",
      "intensity": false,
      "grid": {"from": "data/gt.json"}
    })";
  }
  const RunConfig cfg = run_config_from_json_file(tmp / "run.json");
  const BuildSummary summary = run_build(cfg);
  CHECK(summary.result.frames_used == summary.result.frames_total);
  CHECK(summary.result.frames_used > 10);

  for (const char* name :
       {"map.json", "map_logprob_c0.bin", "map_prob_c4.bin", "map_observed.png",
        "map_labels.png", "map_labels_filled.png", "map_labels_rgb.png",
        "map_labels_filled_rgb.png", "map_summary.json"}) {
    CHECK_MESSAGE(fs::exists(fs::path(tmp / "out") / name), name);
  }
  {
    std::ifstream in(tmp / "out/map_summary.json");
    nlohmann::json j;
    in >> j;
    CHECK(j.at("mode") == "dense");
    CHECK(j.at("frames_used").get<int>() == summary.result.frames_used);
    CHECK(j.at("points_integrated").get<std::uint64_t>() ==
          summary.result.points_integrated);
  }

  EvalRequest eval;
  eval.pred_path = tmp / "out/map_labels_filled.png";
  eval.gt_path = tmp / "data/gt_labels.png";
  eval.pred_meta_path = tmp / "out/map.json";
  eval.gt_meta_path = tmp / "data/gt.json";
  eval.classes = {0, 4};
  eval.out_json_path = tmp / "eval.json";
  const std::string table = run_eval(eval);
  CHECK(table.find("mIoU") != std::string::npos);
  {
    std::ifstream in(tmp / "eval.json");
    nlohmann::json j;
    in >> j;
    CHECK(j.at("miou").get<double>() > 0.9);
  }

  run_render(tmp / "out/map_labels_filled.png", "", tmp / "out/map.json", tmp / "render.png");
  const RgbImage rendered = read_rgb_png(tmp / "render.png");
  CHECK(rendered.width == 120);
  CHECK(rendered.height == 60);

  SUBCASE("mismatched grid sidecars fail the eval") {
    save_grid_meta(tmp / "other.json", SemanticGrid::global(0.0, 0.0, 4, 4, 1.0),
                   LabelSet::default_set());
    EvalRequest bad = eval;
    bad.gt_meta_path = tmp / "other.json";
    bad.out_json_path.clear();
    CHECK_THROWS_AS(run_eval(bad), ConfigError);
  }

  SUBCASE("live mode builds from the scan files") {
    RunConfig live = cfg;
    live.build.mode = MapMode::kLive;
    live.scans_manifest_path = tmp / "data/scans_manifest.json";
    live.output_base = tmp / "out_live/map";
    const BuildSummary live_summary = run_build(live);
    CHECK(live_summary.result.frames_used == summary.result.frames_used);
    CHECK(live_summary.result.points_integrated > 1000u);

    EvalRequest live_eval = eval;
    live_eval.pred_path = tmp / "out_live/map_labels_filled.png";
    live_eval.pred_meta_path = tmp / "out_live/map.json";
    live_eval.out_json_path = tmp / "eval_live.json";
    run_eval(live_eval);
    std::ifstream in(tmp / "eval_live.json");
    nlohmann::json j;
    in >> j;
    CHECK(j.at("miou").get<double>() > 0.5);
  }

  SUBCASE("images outside the label set fail the build") {
    SemanticImage bad_img;
    bad_img.width = 4;
    bad_img.height = 3;
    bad_img.labels.assign(12, 200);
    write_gray_png(tmp / "bad.png", bad_img);
    {
      std::ofstream out(tmp / "bad_manifest.json");
      out << R"([{"timestamp": 0.0, "path": "bad.png"}])";
    }
    RunConfig bad = cfg;
    bad.images_manifest_path = tmp / "bad_manifest.json";
    bad.output_base = tmp / "out_bad/map";
    CHECK_THROWS_AS(run_build(bad), IoError);
  }
}
