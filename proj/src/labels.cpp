#include "bevmap/labels.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "bevmap/errors.hpp"

namespace bevmap {

LabelSet::LabelSet(std::vector<LabelDef> entries) : entries_(std::move(entries)) {
  channel_lut_.fill(-1);
  std::set<int> ids;
  std::set<int> channels;
  for (const LabelDef& e : entries_) {
    if (e.id >= kUnlabeled) {
      throw ConfigError("label set: id " + std::to_string(e.id) + " must be < 255");
    }
    if (!ids.insert(e.id).second) {
      throw ConfigError("label set: duplicate id " + std::to_string(e.id));
    }
    if (e.channel) {
      if (*e.channel < 0 || *e.channel >= kNumChannels) {
        throw ConfigError("label set: channel index " + std::to_string(*e.channel) +
                          " outside 0.." + std::to_string(kNumChannels - 1));
      }
      if (!channels.insert(*e.channel).second) {
        throw ConfigError("label set: duplicate channel " + std::to_string(*e.channel));
      }
      channel_lut_[e.id] = static_cast<std::int16_t>(*e.channel);
      channel_ids_[*e.channel] = e.id;
    }
  }
  if (static_cast<int>(channels.size()) != kNumChannels) {
    throw ConfigError("label set: exactly " + std::to_string(kNumChannels) +
                      " entries must carry a map-channel index");
  }
}

const LabelDef* LabelSet::find(std::uint8_t id) const {
  for (const LabelDef& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::optional<int> LabelSet::channel_of(std::uint8_t id) const {
  const std::int16_t ch = channel_lut_[id];
  if (ch < 0) return std::nullopt;
  return static_cast<int>(ch);
}

std::uint8_t LabelSet::id_for_channel(int channel) const {
  if (channel < 0 || channel >= kNumChannels) {
    throw ConfigError("channel index out of range: " + std::to_string(channel));
  }
  return channel_ids_[channel];
}

const std::string& LabelSet::channel_name(int channel) const {
  return find(id_for_channel(channel))->name;
}

std::array<std::uint8_t, 3> LabelSet::channel_color(int channel) const {
  return find(id_for_channel(channel))->rgb;
}

std::vector<std::string> LabelSet::channel_names() const {
  std::vector<std::string> names;
  names.reserve(kNumChannels);
  for (int c = 0; c < kNumChannels; ++c) names.push_back(channel_name(c));
  return names;
}

LabelSet LabelSet::load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open label set file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed label set JSON in " + path + ": " + e.what());
  }
  if (!doc.is_array()) throw IoError("label set JSON must be an array: " + path);
  std::vector<LabelDef> entries;
  for (const auto& item : doc) {
    try {
      LabelDef def;
      def.id = static_cast<std::uint8_t>(item.at("id").get<int>());
      def.name = item.at("name").get<std::string>();
      const auto& rgb = item.at("rgb");
      if (!rgb.is_array() || rgb.size() != 3) {
        throw IoError("label set entry rgb must be [r,g,b]: " + path);
      }
      for (int i = 0; i < 3; ++i) {
        def.rgb[i] = static_cast<std::uint8_t>(rgb[i].get<int>());
      }
      if (item.contains("channel") && !item["channel"].is_null()) {
        def.channel = item["channel"].get<int>();
      }
      entries.push_back(std::move(def));
    } catch (const nlohmann::json::exception& e) {
      throw IoError("malformed label set entry in " + path + ": " + e.what());
    }
  }
  try {
    return LabelSet(std::move(entries));
  } catch (const ConfigError& e) {
    throw IoError(std::string(e.what()) + " (" + path + ")");
  }
}

void LabelSet::save_json(const std::string& path) const {
  nlohmann::json doc = nlohmann::json::array();
  for (const LabelDef& e : entries_) {
    nlohmann::json item;
    item["id"] = static_cast<int>(e.id);
    item["name"] = e.name;
    item["rgb"] = {static_cast<int>(e.rgb[0]), static_cast<int>(e.rgb[1]),
                   static_cast<int>(e.rgb[2])};
    item["channel"] = e.channel ? nlohmann::json(*e.channel) : nlohmann::json(nullptr);
    doc.push_back(std::move(item));
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write label set file: " + path);
  out << doc.dump(2) << "\n";
}

LabelSet LabelSet::default_set() {
  std::vector<LabelDef> entries;
  entries.push_back({0, "road", {128, 64, 128}, 0});
  entries.push_back({1, "crosswalk", {140, 140, 200}, 1});
  entries.push_back({2, "lane_mark", {255, 255, 255}, 2});
  entries.push_back({3, "vegetation", {107, 142, 35}, 3});
  entries.push_back({4, "sidewalk", {244, 35, 232}, 4});
  entries.push_back({5, "car", {0, 0, 142}, std::nullopt});
  entries.push_back({6, "person", {220, 20, 60}, std::nullopt});
  entries.push_back({7, "sky", {70, 130, 180}, std::nullopt});
  entries.push_back({8, "building", {70, 70, 70}, std::nullopt});
  entries.push_back({9, "curb", {196, 196, 196}, std::nullopt});
  return LabelSet(std::move(entries));
}

}  // namespace bevmap
