#pragma once

// Deliberately naive reference implementations the tests cross-check the
// library against. Nothing here may call into bevmap beyond plain types.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

// Shortest-path slerp through the relative angle-axis.
inline Eigen::Quaterniond slerp(Eigen::Quaterniond q0, Eigen::Quaterniond q1, double t) {
  q0.normalize();
  q1.normalize();
  if (q0.dot(q1) < 0.0) q1.coeffs() = -q1.coeffs();
  const Eigen::Quaterniond rel = q0.conjugate() * q1;
  Eigen::AngleAxisd aa(rel);
  aa.angle() *= t;
  return q0 * Eigen::Quaterniond(aa);
}

// Repeated multiply-and-renormalize in probability space. `M` rows are true
// labels, columns predictions; `observations` is the sequence of predicted
// channels applied to a single cell.
inline std::vector<double> bayes_fuse(const Eigen::MatrixXd& M,
                                      const std::vector<int>& observations) {
  const int C = static_cast<int>(M.rows());
  std::vector<double> p(C, 1.0 / C);
  for (int z : observations) {
    double sum = 0.0;
    for (int i = 0; i < C; ++i) {
      p[i] *= M(i, z);
      sum += p[i];
    }
    for (int i = 0; i < C; ++i) p[i] /= sum;
  }
  return p;
}

// Modal vote with ties toward the lowest channel.
inline int mode(const std::vector<int>& votes) {
  std::map<int, int> tally;
  for (int v : votes) ++tally[v];
  int best = -1, best_n = 0;
  for (const auto& [v, n] : tally) {
    if (n > best_n) {
      best = v;
      best_n = n;
    }
  }
  return best;
}

struct Pixel {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
  bool valid = false;
};

// Pinhole projection written out longhand.
inline Pixel project(double fx, double fy, double cx, double cy, int width, int height,
                     const Eigen::Vector3d& cam_pt) {
  Pixel px;
  if (cam_pt.z() <= 0.0) return px;
  px.u = fx * cam_pt.x() / cam_pt.z() + cx;
  px.v = fy * cam_pt.y() / cam_pt.z() + cy;
  px.depth = cam_pt.z();
  px.valid = px.u >= 0.0 && px.u < width && px.v >= 0.0 && px.v < height;
  return px;
}

// Parametric ray vs horizontal plane z = h. Returns t or -1.
inline double ray_plane_t(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir, double h) {
  if (std::abs(dir.z()) < 1e-15) return -1.0;
  const double t = (h - origin.z()) / dir.z();
  return t > 0.0 ? t : -1.0;
}

struct Tally {
  long tp = 0, fp = 0, fn = 0, tn = 0;
};

// Per-cell confusion tally over cells where gt != 255. Predicting 255 is
// never a positive.
inline Tally tally_class(const std::vector<std::uint8_t>& pred,
                         const std::vector<std::uint8_t>& gt, int channel) {
  Tally t;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i] == 255) continue;
    const bool g = gt[i] == channel;
    const bool p = pred[i] != 255 && pred[i] == channel;
    if (g && p) ++t.tp;
    else if (!g && p) ++t.fp;
    else if (g && !p) ++t.fn;
    else ++t.tn;
  }
  return t;
}

}  // namespace oracle
