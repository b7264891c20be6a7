#pragma once

#include <string>
#include <vector>

namespace bevmap {

struct ManifestEntry {
  double timestamp = 0.0;
  std::string path;
};

// JSON array of {timestamp, path}. Reading resolves relative paths against
// the manifest's own directory and sorts by timestamp; writing keeps the
// given paths verbatim.
std::vector<ManifestEntry> read_manifest(const std::string& path);
void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);

}  // namespace bevmap
