#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bevmap/geometry.hpp"
#include "bevmap/labels.hpp"

namespace bevmap {

struct SemanticPoint {
  Vec3 position = Vec3::Zero();
  std::uint8_t label = LabelSet::kUnlabeled;
  float intensity = 0.0f;
};

enum class Frame { kWorld, kBody };

// Labeled point cloud, either in the world frame or in the body frame of a
// specific pose (carried alongside).
struct SemanticPointCloud {
  Frame frame = Frame::kWorld;
  std::optional<Pose> pose;  // set when frame == kBody
  std::vector<SemanticPoint> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

// Rigid change of frame; labels and intensities unchanged.
SemanticPointCloud to_world(const SemanticPointCloud& cloud);
SemanticPointCloud to_body(const SemanticPointCloud& cloud, const Pose& pose);

}  // namespace bevmap
