#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "bevmap/cloud.hpp"
#include "bevmap/geometry.hpp"
#include "bevmap/labels.hpp"

namespace bevmap {

// Row-stochastic label confusion model. Row = true label, column = predicted
// label. Entries are floored at eps before logs so that degenerate rows stay
// finite, then renormalized.
class ObservationModel {
 public:
  static ObservationModel vanilla(double lambda, int channels, double eps = 1e-6);
  static ObservationModel from_confusion(const Eigen::MatrixXd& counts, double eps = 1e-6);
  static ObservationModel from_rows(const Eigen::MatrixXd& rows, double eps = 1e-6);

  int channels() const { return static_cast<int>(prob_.rows()); }
  double prob(int true_label, int predicted) const { return prob_(true_label, predicted); }
  double logprob(int true_label, int predicted) const { return log_(true_label, predicted); }
  const Eigen::MatrixXd& matrix() const { return prob_; }

 private:
  explicit ObservationModel(Eigen::MatrixXd floored);
  Eigen::MatrixXd prob_;
  Eigen::MatrixXd log_;
};

// Reflectivity prior for painted lane marks: a flat log-probability bonus on
// the target channel. With require_label set (the default) the boost fires
// only when the point was also predicted as the target class; cleared, any
// sufficiently bright point qualifies.
struct IntensityModel {
  double threshold = 14.0;
  double gamma = 0.5;
  int target_channel = 2;
  bool require_label = true;
};

struct Cell {
  int row = 0;
  int col = 0;
  bool operator==(const Cell&) const = default;
};

struct LabelRaster {
  static constexpr std::uint8_t kUnknown = 255;
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> labels;  // row-major

  std::uint8_t& at(int row, int col) { return labels[static_cast<std::size_t>(row) * width + col]; }
  std::uint8_t at(int row, int col) const {
    return labels[static_cast<std::size_t>(row) * width + col];
  }
};

enum class GridFrame { kLocal, kGlobal };

// Bird's-eye-view semantic occupancy grid. Each cell keeps one unnormalized
// log-probability per map channel; posteriors are materialized on demand.
// A local grid lives in the body frame of its anchor pose, a global grid in
// the world frame; either way cell (0,0) covers [x0,x0+d)x[y0,y0+d).
class SemanticGrid {
 public:
  static SemanticGrid local(const Pose& anchor, double x0, double y0, int height, int width,
                            double d);
  static SemanticGrid global(double x0, double y0, int height, int width, double d);

  GridFrame frame() const { return frame_; }
  const Pose& anchor() const { return anchor_; }
  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return LabelSet::kNumChannels; }
  double resolution() const { return d_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }

  std::optional<Cell> cell_at(double x, double y) const;
  Vec2 cell_center(const Cell& cell) const;

  bool observed(const Cell& cell) const;
  double logprob(const Cell& cell, int channel) const;
  std::vector<double>& raw_logprob() { return logprob_; }
  const std::vector<double>& raw_logprob() const { return logprob_; }
  const std::vector<std::uint8_t>& raw_observed() const { return observed_; }

  void update(const Cell& cell, int predicted_channel, const ObservationModel& model);
  void boost_intensity(const Cell& cell, int point_channel, double intensity,
                       const IntensityModel& model);

  // Fold one labeled cloud into the grid. A body-frame cloud carrying a pose
  // is re-expressed in the anchor frame first; a global grid takes world
  // clouds directly. Points whose label has no map channel are skipped.
  // With one_vote_per_cell, each touched cell receives a single update with
  // the most common label among its points (ties toward the lower channel)
  // and at most one intensity boost.
  void integrate(const SemanticPointCloud& cloud, const LabelSet& labels,
                 const ObservationModel& model, const IntensityModel* intensity = nullptr,
                 bool one_vote_per_cell = false);

  // Per-cell softmax over channels; layout matches raw_logprob (row-major,
  // channel fastest).
  std::vector<double> posterior() const;
  std::array<double, LabelSet::kNumChannels> posterior_cell(const Cell& cell) const;

  LabelRaster extract_label_map() const;

  void set_state(const Cell& cell, const std::vector<double>& logprob_vec, bool obs);

  // A 0x0 global grid, for containers that fill one in later.
  SemanticGrid() = default;

 private:
  std::size_t base_index(const Cell& cell) const {
    return (static_cast<std::size_t>(cell.row) * width_ + cell.col) * LabelSet::kNumChannels;
  }

  GridFrame frame_ = GridFrame::kGlobal;
  Pose anchor_;
  double x0_ = 0.0;
  double y0_ = 0.0;
  int height_ = 0;
  int width_ = 0;
  double d_ = 0.2;
  std::vector<double> logprob_;
  std::vector<std::uint8_t> observed_;
};

// Re-anchors a local grid at new_pose when the pose delta exceeds either
// threshold, resampling cell state nearest-neighbor through world
// coordinates. Returns whether a shift happened.
bool maybe_shift_local_map(SemanticGrid& grid, const Pose& new_pose, double threshold_trans,
                           double threshold_rot);

// Single-pass hole fill: every unknown cell with at least min_votes known
// cells in its (window x window) neighborhood takes their modal label, ties
// toward the lower channel. Known cells are untouched.
LabelRaster fill_holes(const LabelRaster& raster, int window, int min_votes);

}  // namespace bevmap
