#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bevmap/config.hpp"
#include "bevmap/errors.hpp"
#include "bevmap/labels.hpp"

namespace {

using namespace bevmap;

std::vector<int> parse_classes(const std::string& arg) {
  const LabelSet labels = LabelSet::default_set();
  std::vector<int> classes;
  std::string token;
  std::istringstream in(arg);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    bool numeric = true;
    for (char c : token) numeric = numeric && std::isdigit(static_cast<unsigned char>(c));
    if (numeric) {
      const int ch = std::stoi(token);
      if (ch < 0 || ch >= LabelSet::kNumChannels) {
        throw ConfigError("class index out of range: " + token);
      }
      classes.push_back(ch);
      continue;
    }
    int found = -1;
    for (int ch = 0; ch < LabelSet::kNumChannels; ++ch) {
      if (labels.channel_name(ch) == token) found = ch;
    }
    if (found < 0) throw ConfigError("unknown class name: " + token);
    classes.push_back(found);
  }
  if (classes.empty()) throw ConfigError("empty class list");
  return classes;
}

struct BuildArgs {
  std::string config, map, trajectory, images, scans, camera, labels, confusion;
  std::string grid_from, out, model, mode, intensity, grid_frame, time_lookup;
  double lambda = 0, gamma = 0, k = 0, d = 0;
  int fill_window = 0, fill_min_votes = 0;
  bool occlusion = false, one_vote = false;
};

int cmd_build(const CLI::App& cmd, const BuildArgs& args) {
  RunConfig cfg;
  if (!args.config.empty()) cfg = run_config_from_json_file(args.config);

  auto given = [&](const std::string& flag) { return cmd.count(flag) > 0; };
  if (given("--map")) cfg.point_map_path = args.map;
  if (given("--trajectory")) cfg.trajectory_path = args.trajectory;
  if (given("--images")) cfg.images_manifest_path = args.images;
  if (given("--scans")) cfg.scans_manifest_path = args.scans;
  if (given("--camera")) cfg.camera_path = args.camera;
  if (given("--labels")) cfg.label_set_path = args.labels;
  if (given("--confusion")) cfg.confusion_path = args.confusion;
  if (given("--grid-from")) cfg.grid_from_path = args.grid_from;
  if (given("--out")) cfg.output_base = args.out;
  if (given("--model")) {
    cfg.model = args.model == "cfn" ? ModelKind::kCfn : ModelKind::kVanilla;
  }
  if (given("--mode")) {
    cfg.build.mode = args.mode == "live"     ? MapMode::kLive
                     : args.mode == "planar" ? MapMode::kPlanar
                                             : MapMode::kDense;
  }
  if (given("--intensity")) cfg.build.use_intensity = args.intensity == "on";
  if (given("--lambda")) cfg.lambda = args.lambda;
  if (given("--gamma")) cfg.build.intensity.gamma = args.gamma;
  if (given("--k")) cfg.build.intensity.threshold = args.k;
  if (given("--d")) cfg.build.d = args.d;
  if (given("--grid-frame")) {
    cfg.build.grid.frame = args.grid_frame == "local" ? GridFrame::kLocal : GridFrame::kGlobal;
  }
  if (given("--time-lookup")) {
    cfg.build.lookup =
        args.time_lookup == "nearest" ? TimeLookup::kNearest : TimeLookup::kInterpolate;
  }
  if (given("--fill-window")) cfg.build.fill_window = args.fill_window;
  if (given("--fill-min-votes")) cfg.build.fill_min_votes = args.fill_min_votes;
  if (given("--occlusion")) cfg.build.occlusion = true;
  if (given("--one-vote")) cfg.build.one_vote_per_cell = true;

  const BuildSummary summary = run_build(cfg);
  if (summary.result.frames_total == 0) {
    std::fprintf(stderr, "warning: manifest lists no frames; wrote an empty grid\n");
  }
  for (double t : summary.result.skipped_timestamps) {
    std::fprintf(stderr, "warning: frame at t=%.6f outside the trajectory, skipped\n", t);
  }
  std::printf("frames used: %d/%d, points integrated: %zu\n", summary.result.frames_used,
              summary.result.frames_total, summary.result.points_integrated);
  std::printf("wrote %s.json and companion rasters\n", summary.output_base.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probabilistic bird's-eye-view semantic maps from labeled images and point maps"};
  app.require_subcommand(1);

  BuildArgs build_args;
  CLI::App* build = app.add_subcommand("build-map", "fuse per-frame labels into a BEV grid");
  build->add_option("--config", build_args.config, "run config JSON");
  build->add_option("--map", build_args.map, "dense point map (.ply/.csv)");
  build->add_option("--trajectory", build_args.trajectory, "pose file");
  build->add_option("--images", build_args.images, "image manifest JSON");
  build->add_option("--scans", build_args.scans, "scan manifest JSON (live mode)");
  build->add_option("--camera", build_args.camera, "camera JSON");
  build->add_option("--labels", build_args.labels, "label set JSON");
  build->add_option("--confusion", build_args.confusion, "confusion matrix JSON (cfn)");
  build->add_option("--grid-from", build_args.grid_from, "grid sidecar to copy the spec from");
  build->add_option("--out", build_args.out, "output base path");
  build->add_option("--model", build_args.model, "observation model")
      ->check(CLI::IsMember({"vanilla", "cfn"}));
  build->add_option("--mode", build_args.mode, "mapping mode")
      ->check(CLI::IsMember({"dense", "live", "planar"}));
  build->add_option("--intensity", build_args.intensity, "lane-intensity prior")
      ->check(CLI::IsMember({"on", "off"}));
  build->add_option("--lambda", build_args.lambda, "vanilla model off-diagonal weight");
  build->add_option("--gamma", build_args.gamma, "intensity boost, nats");
  build->add_option("--k", build_args.k, "intensity threshold");
  build->add_option("--d", build_args.d, "cell size, meters");
  build->add_option("--grid-frame", build_args.grid_frame, "grid frame")
      ->check(CLI::IsMember({"local", "global"}));
  build->add_option("--time-lookup", build_args.time_lookup, "pose lookup")
      ->check(CLI::IsMember({"interpolate", "nearest"}));
  build->add_option("--fill-window", build_args.fill_window, "hole-fill window, cells");
  build->add_option("--fill-min-votes", build_args.fill_min_votes, "hole-fill vote minimum");
  build->add_flag("--occlusion", build_args.occlusion, "cull points hidden behind nearer surface");
  build->add_flag("--one-vote", build_args.one_vote, "one update per cell per frame");

  std::string eval_pred, eval_gt, eval_pred_meta, eval_gt_meta, eval_classes, eval_out;
  CLI::App* eval = app.add_subcommand("eval", "score a label raster against ground truth");
  eval->add_option("--pred", eval_pred, "predicted label raster PNG")->required();
  eval->add_option("--gt", eval_gt, "ground-truth label raster PNG")->required();
  eval->add_option("--pred-meta", eval_pred_meta, "predicted grid sidecar");
  eval->add_option("--gt-meta", eval_gt_meta, "ground-truth grid sidecar");
  eval->add_option("--classes", eval_classes, "channels to score, e.g. road,crosswalk,2");
  eval->add_option("--out", eval_out, "report JSON path");

  std::string synth_spec, synth_out;
  std::uint64_t synth_seed = 0;
  bool synth_scans = false;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--spec", synth_spec, "scene spec JSON (omit for the built-in scene)");
  synth->add_option("--out", synth_out, "output directory")->required();
  CLI::Option* seed_opt = synth->add_option("--seed", synth_seed, "override the spec seed");
  synth->add_flag("--scans", synth_scans, "also simulate per-frame LiDAR scans");

  std::string render_raster, render_labels, render_meta, render_out;
  CLI::App* render = app.add_subcommand("render", "colorize a label raster");
  render->add_option("--raster", render_raster, "label raster PNG")->required();
  render->add_option("--labels", render_labels, "label set JSON");
  render->add_option("--meta", render_meta, "grid sidecar to validate against");
  render->add_option("--out", render_out, "output PNG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (build->parsed()) return cmd_build(*build, build_args);
    if (eval->parsed()) {
      EvalRequest request;
      request.pred_path = eval_pred;
      request.gt_path = eval_gt;
      request.pred_meta_path = eval_pred_meta;
      request.gt_meta_path = eval_gt_meta;
      if (!eval_classes.empty()) request.classes = parse_classes(eval_classes);
      request.out_json_path = eval_out;
      std::printf("%s", run_eval(request).c_str());
      return 0;
    }
    if (synth->parsed()) {
      SceneSpec spec = synth_spec.empty() ? default_scene() : scene_from_json_file(synth_spec);
      if (seed_opt->count() > 0) spec.seed = synth_seed;
      if (synth_scans) spec.scans = true;
      run_synth(spec, synth_out);
      std::printf("wrote dataset to %s\n", synth_out.c_str());
      return 0;
    }
    if (render->parsed()) {
      run_render(render_raster, render_labels, render_meta, render_out);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
  return 0;
}
