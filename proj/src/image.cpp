#include "bevmap/image.hpp"

#include <array>

namespace bevmap {

bool labels_valid(const SemanticImage& img, const LabelSet& labels) {
  std::array<bool, 256> ok{};
  ok[LabelSet::kUnlabeled] = true;
  for (const LabelDef& e : labels.entries()) ok[e.id] = true;
  for (std::uint8_t v : img.labels) {
    if (!ok[v]) return false;
  }
  return true;
}

}  // namespace bevmap
