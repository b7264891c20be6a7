#pragma once

#include <string>

#include "bevmap/grid.hpp"
#include "bevmap/image.hpp"
#include "bevmap/labels.hpp"

namespace bevmap {

// On-disk grid layout, all sharing a base path:
//   <base>.json            frame, origin, d, H, W, C, channel names (+ anchor
//                          pose for local grids)
//   <base>_logprob_c<k>.bin  unnormalized log-probabilities, one file per
//                          channel, row-major float32 little-endian
//   <base>_prob_c<k>.bin   normalized posteriors, same layout
//   <base>_observed.png    8-bit mask, 255 = cell received at least one update
void save_grid(const std::string& base, const SemanticGrid& grid, const LabelSet& labels);

// Just the JSON sidecar describing a grid's frame, extent, and resolution.
void save_grid_meta(const std::string& sidecar_path, const SemanticGrid& grid,
                    const LabelSet& labels);

// Rebuilds a grid from <base>.json, the logprob channel files, and the
// observed mask.
SemanticGrid load_grid(const std::string& base);

// Reads just the sidecar and reports the grid shape without touching rasters.
struct GridMeta {
  GridFrame frame = GridFrame::kGlobal;
  Pose anchor;
  double x0 = 0.0;
  double y0 = 0.0;
  int height = 0;
  int width = 0;
  double d = 0.0;
  std::vector<std::string> channel_names;
};
GridMeta load_grid_meta(const std::string& sidecar_path);

// An empty grid with the same frame, anchor, extent, and resolution as the
// sidecar describes.
SemanticGrid grid_like(const GridMeta& meta);

void write_label_raster_png(const std::string& path, const LabelRaster& raster);
LabelRaster read_label_raster_png(const std::string& path);

// Channel colors from the label set; unknown cells render black.
RgbImage render_label_raster(const LabelRaster& raster, const LabelSet& labels);

}  // namespace bevmap
