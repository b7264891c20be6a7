#include "bevmap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bevmap/errors.hpp"

namespace bevmap {

ObservationModel::ObservationModel(Eigen::MatrixXd floored) : prob_(std::move(floored)) {
  for (Eigen::Index r = 0; r < prob_.rows(); ++r) {
    prob_.row(r) /= prob_.row(r).sum();
  }
  log_ = prob_.array().log().matrix();
  for (Eigen::Index r = 0; r < prob_.rows(); ++r) {
    BEVMAP_CHECK(std::abs(prob_.row(r).sum() - 1.0) <= 1e-9,
                 "observation model row does not sum to 1");
  }
}

ObservationModel ObservationModel::vanilla(double lambda, int channels, double eps) {
  if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
  if (channels < 1) throw ConfigError("observation model needs at least one channel");
  const double denom = 1.0 + channels * lambda;
  Eigen::MatrixXd m(channels, channels);
  m.setConstant(lambda / denom);
  m.diagonal().setConstant((1.0 + lambda) / denom);
  return ObservationModel(m.cwiseMax(eps));
}

ObservationModel ObservationModel::from_confusion(const Eigen::MatrixXd& counts, double eps) {
  if (counts.rows() != counts.cols() || counts.rows() < 1) {
    throw ConfigError("confusion matrix must be square");
  }
  if ((counts.array() < 0.0).any()) throw ConfigError("confusion counts must be nonnegative");
  Eigen::MatrixXd m(counts.rows(), counts.cols());
  for (Eigen::Index r = 0; r < counts.rows(); ++r) {
    const double sum = counts.row(r).sum();
    if (sum <= 0.0) {
      throw ConfigError("confusion matrix row " + std::to_string(r) +
                        " is all zero; that class was never evaluated");
    }
    m.row(r) = counts.row(r) / sum;
  }
  return ObservationModel(m.cwiseMax(eps));
}

ObservationModel ObservationModel::from_rows(const Eigen::MatrixXd& rows, double eps) {
  if (rows.rows() != rows.cols() || rows.rows() < 1) {
    throw ConfigError("observation model must be square");
  }
  if ((rows.array() < 0.0).any()) throw ConfigError("probabilities must be nonnegative");
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    if (rows.row(r).sum() <= 0.0) {
      throw ConfigError("observation model row " + std::to_string(r) + " is all zero");
    }
  }
  return ObservationModel(rows.cwiseMax(eps));
}

SemanticGrid SemanticGrid::local(const Pose& anchor, double x0, double y0, int height,
                                 int width, double d) {
  if (height <= 0 || width <= 0) throw ConfigError("grid size must be positive");
  if (!(d > 0.0)) throw ConfigError("grid resolution must be positive");
  SemanticGrid g;
  g.frame_ = GridFrame::kLocal;
  g.anchor_ = anchor;
  g.x0_ = x0;
  g.y0_ = y0;
  g.height_ = height;
  g.width_ = width;
  g.d_ = d;
  g.logprob_.assign(static_cast<std::size_t>(height) * width * LabelSet::kNumChannels, 0.0);
  g.observed_.assign(static_cast<std::size_t>(height) * width, 0);
  return g;
}

SemanticGrid SemanticGrid::global(double x0, double y0, int height, int width, double d) {
  SemanticGrid g = local(Pose{}, x0, y0, height, width, d);
  g.frame_ = GridFrame::kGlobal;
  return g;
}

std::optional<Cell> SemanticGrid::cell_at(double x, double y) const {
  const int col = static_cast<int>(std::floor((x - x0_) / d_));
  const int row = static_cast<int>(std::floor((y - y0_) / d_));
  if (row < 0 || row >= height_ || col < 0 || col >= width_) return std::nullopt;
  return Cell{row, col};
}

Vec2 SemanticGrid::cell_center(const Cell& cell) const {
  return Vec2(x0_ + (cell.col + 0.5) * d_, y0_ + (cell.row + 0.5) * d_);
}

bool SemanticGrid::observed(const Cell& cell) const {
  return observed_[static_cast<std::size_t>(cell.row) * width_ + cell.col] != 0;
}

double SemanticGrid::logprob(const Cell& cell, int channel) const {
  return logprob_[base_index(cell) + channel];
}

void SemanticGrid::update(const Cell& cell, int predicted_channel,
                          const ObservationModel& model) {
  BEVMAP_CHECK(model.channels() == LabelSet::kNumChannels,
               "observation model channel count mismatch");
  BEVMAP_CHECK(predicted_channel >= 0 && predicted_channel < LabelSet::kNumChannels,
               "predicted channel out of range");
  const std::size_t base = base_index(cell);
  for (int i = 0; i < LabelSet::kNumChannels; ++i) {
    logprob_[base + i] += model.logprob(i, predicted_channel);
  }
  observed_[static_cast<std::size_t>(cell.row) * width_ + cell.col] = 1;
}

void SemanticGrid::boost_intensity(const Cell& cell, int point_channel, double intensity,
                                   const IntensityModel& model) {
  if (intensity < model.threshold) return;
  if (model.require_label && point_channel != model.target_channel) return;
  logprob_[base_index(cell) + model.target_channel] += model.gamma;
  observed_[static_cast<std::size_t>(cell.row) * width_ + cell.col] = 1;
}

void SemanticGrid::integrate(const SemanticPointCloud& cloud, const LabelSet& labels,
                             const ObservationModel& model, const IntensityModel* intensity,
                             bool one_vote_per_cell) {
  if (frame_ == GridFrame::kGlobal) {
    BEVMAP_CHECK(cloud.frame == Frame::kWorld, "global grid expects a world-frame cloud");
  } else {
    BEVMAP_CHECK(cloud.frame == Frame::kBody, "local grid expects a body-frame cloud");
  }

  Eigen::Isometry3d to_grid = Eigen::Isometry3d::Identity();
  bool needs_transform = false;
  if (frame_ == GridFrame::kLocal && cloud.pose.has_value()) {
    to_grid = anchor_.isometry().inverse() * cloud.pose->isometry();
    needs_transform = !to_grid.isApprox(Eigen::Isometry3d::Identity(), 1e-12);
  }

  struct Tally {
    std::array<int, LabelSet::kNumChannels> votes{};
    bool boost = false;
  };
  std::map<std::pair<int, int>, Tally> tallies;

  for (const SemanticPoint& pt : cloud.points) {
    const auto channel = labels.channel_of(pt.label);
    if (!channel) continue;
    const Vec3 p = needs_transform ? Vec3(to_grid * pt.position) : pt.position;
    const auto cell = cell_at(p.x(), p.y());
    if (!cell) continue;
    if (one_vote_per_cell) {
      Tally& t = tallies[{cell->row, cell->col}];
      ++t.votes[*channel];
      if (intensity && pt.intensity >= intensity->threshold &&
          (!intensity->require_label || *channel == intensity->target_channel)) {
        t.boost = true;
      }
    } else {
      update(*cell, *channel, model);
      if (intensity) boost_intensity(*cell, *channel, pt.intensity, *intensity);
    }
  }

  for (const auto& [rc, tally] : tallies) {
    const Cell cell{rc.first, rc.second};
    const int mode = static_cast<int>(
        std::max_element(tally.votes.begin(), tally.votes.end()) - tally.votes.begin());
    update(cell, mode, model);
    if (intensity && tally.boost) {
      logprob_[base_index(cell) + intensity->target_channel] += intensity->gamma;
    }
  }
}

std::vector<double> SemanticGrid::posterior() const {
  std::vector<double> out(logprob_.size());
  const std::size_t cells = static_cast<std::size_t>(height_) * width_;
  for (std::size_t c = 0; c < cells; ++c) {
    const std::size_t base = c * LabelSet::kNumChannels;
    double mx = logprob_[base];
    for (int i = 1; i < LabelSet::kNumChannels; ++i) mx = std::max(mx, logprob_[base + i]);
    double sum = 0.0;
    for (int i = 0; i < LabelSet::kNumChannels; ++i) {
      out[base + i] = std::exp(logprob_[base + i] - mx);
      sum += out[base + i];
    }
    for (int i = 0; i < LabelSet::kNumChannels; ++i) out[base + i] /= sum;
  }
  return out;
}

std::array<double, LabelSet::kNumChannels> SemanticGrid::posterior_cell(const Cell& cell) const {
  const std::size_t base = base_index(cell);
  std::array<double, LabelSet::kNumChannels> out;
  double mx = logprob_[base];
  for (int i = 1; i < LabelSet::kNumChannels; ++i) mx = std::max(mx, logprob_[base + i]);
  double sum = 0.0;
  for (int i = 0; i < LabelSet::kNumChannels; ++i) {
    out[i] = std::exp(logprob_[base + i] - mx);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

LabelRaster SemanticGrid::extract_label_map() const {
  LabelRaster raster;
  raster.height = height_;
  raster.width = width_;
  raster.labels.assign(static_cast<std::size_t>(height_) * width_, LabelRaster::kUnknown);
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      const Cell cell{r, c};
      if (!observed(cell)) continue;
      const std::size_t base = base_index(cell);
      int best = 0;
      for (int i = 1; i < LabelSet::kNumChannels; ++i) {
        if (logprob_[base + i] > logprob_[base + best]) best = i;
      }
      raster.at(r, c) = static_cast<std::uint8_t>(best);
    }
  }
  return raster;
}

void SemanticGrid::set_state(const Cell& cell, const std::vector<double>& logprob_vec,
                             bool obs) {
  BEVMAP_CHECK(logprob_vec.size() == static_cast<std::size_t>(LabelSet::kNumChannels),
               "log-prob vector size mismatch");
  const std::size_t base = base_index(cell);
  for (int i = 0; i < LabelSet::kNumChannels; ++i) logprob_[base + i] = logprob_vec[i];
  observed_[static_cast<std::size_t>(cell.row) * width_ + cell.col] = obs ? 1 : 0;
}

bool maybe_shift_local_map(SemanticGrid& grid, const Pose& new_pose, double threshold_trans,
                           double threshold_rot) {
  BEVMAP_CHECK(grid.frame() == GridFrame::kLocal, "shift applies to local grids only");
  const Pose& old_pose = grid.anchor();
  const double dt = (new_pose.translation - old_pose.translation).norm();
  const double dr = std::abs(wrap_angle(new_pose.yaw() - old_pose.yaw()));
  if (dt < threshold_trans && dr < threshold_rot) return false;

  SemanticGrid shifted = SemanticGrid::local(new_pose, grid.x0(), grid.y0(), grid.height(),
                                             grid.width(), grid.resolution());
  const Eigen::Isometry3d old_from_new = old_pose.isometry().inverse() * new_pose.isometry();
  std::vector<double> state(LabelSet::kNumChannels);
  for (int r = 0; r < shifted.height(); ++r) {
    for (int c = 0; c < shifted.width(); ++c) {
      const Cell cell{r, c};
      const Vec2 center = shifted.cell_center(cell);
      const Vec3 in_old = old_from_new * Vec3(center.x(), center.y(), 0.0);
      const auto src = grid.cell_at(in_old.x(), in_old.y());
      if (!src) continue;
      for (int i = 0; i < LabelSet::kNumChannels; ++i) state[i] = grid.logprob(*src, i);
      shifted.set_state(cell, state, grid.observed(*src));
    }
  }
  grid = std::move(shifted);
  return true;
}

LabelRaster fill_holes(const LabelRaster& raster, int window, int min_votes) {
  if (window < 3 || window % 2 == 0) throw ConfigError("fill window must be odd and >= 3");
  if (min_votes < 1) throw ConfigError("min_votes must be >= 1");
  LabelRaster out = raster;
  const int half = window / 2;
  for (int r = 0; r < raster.height; ++r) {
    for (int c = 0; c < raster.width; ++c) {
      if (raster.at(r, c) != LabelRaster::kUnknown) continue;
      std::array<int, LabelSet::kNumChannels> votes{};
      int known = 0;
      for (int dr = -half; dr <= half; ++dr) {
        for (int dc = -half; dc <= half; ++dc) {
          const int rr = r + dr;
          const int cc = c + dc;
          if (rr < 0 || rr >= raster.height || cc < 0 || cc >= raster.width) continue;
          const std::uint8_t v = raster.at(rr, cc);
          if (v == LabelRaster::kUnknown) continue;
          ++votes[v];
          ++known;
        }
      }
      if (known < min_votes) continue;
      const int mode = static_cast<int>(
          std::max_element(votes.begin(), votes.end()) - votes.begin());
      out.at(r, c) = static_cast<std::uint8_t>(mode);
    }
  }
  return out;
}

}  // namespace bevmap
