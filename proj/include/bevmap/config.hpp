#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bevmap/pipeline.hpp"
#include "bevmap/synth.hpp"

namespace bevmap {

enum class ModelKind { kVanilla, kCfn };

// Everything a build run needs: input locations, model selection, and the
// numeric knobs. Loadable from JSON with CLI overrides on top.
struct RunConfig {
  std::string point_map_path;
  std::string trajectory_path;
  std::string images_manifest_path;
  std::string scans_manifest_path;  // live mode
  std::string label_set_path;       // empty: built-in set
  std::string camera_path;
  std::optional<CameraModel> camera_inline;
  std::string confusion_path;  // cfn model source
  std::string grid_from_path;  // sidecar to copy the grid spec from
  std::string output_base = "out/map";

  ModelKind model = ModelKind::kVanilla;
  double lambda = 0.1;
  double eps_floor = 1e-6;
  BuildConfig build;
};

RunConfig run_config_from_json_file(const std::string& path);

// 5x5 matrix from JSON: either {"counts": rows} or {"rows": rows}, or a bare
// array of rows. Counts and probability rows both pass through the usual
// row-normalization.
ObservationModel observation_model_from_file(const std::string& path, double eps_floor);

struct BuildSummary {
  BuildResult result;  // grid moved out of here after artifacts are written
  std::string output_base;
};

// Loads every input named by the config, builds the map, and writes the grid
// artifacts, label rasters, renders, and a summary JSON next to output_base.
BuildSummary run_build(const RunConfig& config);

// Writes the full synthetic dataset for a scene into out_dir: resolved scene
// spec, label set, camera, point map (+ true-label sidecar), trajectory,
// ground-truth and corrupted images with manifests, ground-truth raster and
// sidecar, confusion JSON when the scene corrupts labels, and optional
// per-frame scans.
void run_synth(const SceneSpec& spec, const std::string& out_dir);

struct EvalRequest {
  std::string pred_path;       // label raster PNG
  std::string gt_path;
  std::string pred_meta_path;  // optional sidecars; checked against each other
  std::string gt_meta_path;
  std::vector<int> classes{0, 1, 2, 3, 4};
  std::string out_json_path;  // optional
};

// Returns the text table; writes JSON when requested.
std::string run_eval(const EvalRequest& request);

void run_render(const std::string& raster_png, const std::string& label_set_path,
                const std::string& meta_path, const std::string& out_png);

}  // namespace bevmap
