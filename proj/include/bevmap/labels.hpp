#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bevmap {

struct LabelDef {
  std::uint8_t id = 0;
  std::string name;
  std::array<std::uint8_t, 3> rgb = {0, 0, 0};
  std::optional<int> channel;  // map channel index, 0..4, for the five map classes
};

// Label taxonomy. Ids are unique and < 255; id 255 is reserved for
// unlabeled/ignore. Exactly five entries carry a map-channel index covering
// 0..4 bijectively (road, crosswalk, lane-mark, vegetation, sidewalk).
class LabelSet {
 public:
  static constexpr std::uint8_t kUnlabeled = 255;
  static constexpr int kNumChannels = 5;

  explicit LabelSet(std::vector<LabelDef> entries);  // validates invariants

  static LabelSet load_json(const std::string& path);
  void save_json(const std::string& path) const;

  // Built-in taxonomy used by the synthetic dataset generator: the five map
  // classes with id == channel, plus a few non-map classes (car, person, ...).
  static LabelSet default_set();

  const std::vector<LabelDef>& entries() const { return entries_; }
  const LabelDef* find(std::uint8_t id) const;
  std::optional<int> channel_of(std::uint8_t id) const;
  std::uint8_t id_for_channel(int channel) const;
  const std::string& channel_name(int channel) const;
  std::array<std::uint8_t, 3> channel_color(int channel) const;
  std::vector<std::string> channel_names() const;

 private:
  std::vector<LabelDef> entries_;
  std::array<std::int16_t, 256> channel_lut_;              // -1 = no channel
  std::array<std::uint8_t, kNumChannels> channel_ids_{};   // channel -> label id
};

}  // namespace bevmap
