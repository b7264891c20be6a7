#include "bevmap/io/manifest_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "bevmap/errors.hpp"

namespace bevmap {

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(path + ": " + ex.what());
  }
  if (!j.is_array()) throw IoError(path + ": manifest must be a JSON array");
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();
  std::vector<ManifestEntry> entries;
  try {
    for (const auto& item : j) {
      ManifestEntry e;
      e.timestamp = item.at("timestamp").get<double>();
      std::filesystem::path p = item.at("path").get<std::string>();
      if (p.is_relative()) p = dir / p;
      e.path = p.string();
      entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(path + ": " + ex.what());
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const ManifestEntry& a, const ManifestEntry& b) {
                     return a.timestamp < b.timestamp;
                   });
  return entries;
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
  nlohmann::json j = nlohmann::json::array();
  for (const ManifestEntry& e : entries) {
    j.push_back({{"timestamp", e.timestamp}, {"path", e.path}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace bevmap
