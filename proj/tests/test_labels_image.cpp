#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "bevmap/errors.hpp"
#include "bevmap/image.hpp"
#include "bevmap/io/png_io.hpp"
#include "bevmap/labels.hpp"

using namespace bevmap;

TEST_CASE("default label set maps the five map classes onto channels 0..4") {
  const LabelSet labels = LabelSet::default_set();
  CHECK(labels.channel_name(0) == "road");
  CHECK(labels.channel_name(1) == "crosswalk");
  CHECK(labels.channel_name(2) == "lane_mark");
  CHECK(labels.channel_name(3) == "vegetation");
  CHECK(labels.channel_name(4) == "sidewalk");
  for (int c = 0; c < LabelSet::kNumChannels; ++c) {
    CHECK(labels.channel_of(labels.id_for_channel(c)) == c);
  }
  CHECK(!labels.channel_of(LabelSet::kUnlabeled).has_value());
  // non-map classes exist but carry no channel
  bool found_non_channel = false;
  for (const LabelDef& def : labels.entries()) {
    if (!def.channel) found_non_channel = true;
  }
  CHECK(found_non_channel);
}

TEST_CASE("label set construction rejects broken channel coverage") {
  std::vector<LabelDef> entries;
  for (int c = 0; c < 4; ++c) {
    LabelDef def;
    def.id = static_cast<std::uint8_t>(c);
    def.name = "c" + std::to_string(c);
    def.channel = c;
    entries.push_back(def);
  }
  CHECK_THROWS_AS(LabelSet{entries}, ConfigError);  // only 4 of 5 channels

  LabelDef dup;
  dup.id = 0;
  dup.name = "dup";
  dup.channel = 4;
  entries.push_back(dup);
  CHECK_THROWS_AS(LabelSet{entries}, ConfigError);  // duplicate id
}

TEST_CASE("label set json round trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "bevmap_labels_test";
  fs::create_directories(dir);
  const std::string path = (dir / "labels.json").string();

  const LabelSet original = LabelSet::default_set();
  original.save_json(path);
  const LabelSet loaded = LabelSet::load_json(path);
  REQUIRE(loaded.entries().size() == original.entries().size());
  for (std::size_t i = 0; i < original.entries().size(); ++i) {
    CHECK(loaded.entries()[i].id == original.entries()[i].id);
    CHECK(loaded.entries()[i].name == original.entries()[i].name);
    CHECK(loaded.entries()[i].rgb == original.entries()[i].rgb);
    CHECK(loaded.entries()[i].channel == original.entries()[i].channel);
  }
  fs::remove_all(dir);
}

TEST_CASE("labels_valid flags ids outside the set") {
  const LabelSet labels = LabelSet::default_set();
  SemanticImage img(4, 2);
  CHECK(labels_valid(img, labels));  // all 255
  img.at(0, 0) = labels.id_for_channel(0);
  CHECK(labels_valid(img, labels));
  img.at(1, 0) = 200;  // not an id in the set
  CHECK(!labels_valid(img, labels));
}

TEST_CASE("gray png round trips pixel-exact") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "bevmap_png_test";
  fs::create_directories(dir);
  const std::string path = (dir / "img.png").string();

  SemanticImage img(7, 5);
  for (int v = 0; v < img.height; ++v) {
    for (int u = 0; u < img.width; ++u) {
      img.at(u, v) = static_cast<std::uint8_t>((u * 31 + v * 7) % 256);
    }
  }
  write_gray_png(path, img);
  const SemanticImage back = read_gray_png(path);
  REQUIRE(back.width == img.width);
  REQUIRE(back.height == img.height);
  CHECK(back.labels == img.labels);
  fs::remove_all(dir);
}

TEST_CASE("rgb png round trips pixel-exact") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "bevmap_png_rgb_test";
  fs::create_directories(dir);
  const std::string path = (dir / "img.png").string();

  RgbImage img(3, 2);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    img.data[i] = static_cast<std::uint8_t>(i * 17 % 256);
  }
  write_rgb_png(path, img);
  const RgbImage back = read_rgb_png(path);
  REQUIRE(back.width == img.width);
  REQUIRE(back.height == img.height);
  CHECK(back.data == img.data);
  fs::remove_all(dir);
}

TEST_CASE("reading a missing png reports the path") {
  try {
    read_gray_png("/nonexistent/bevmap/image.png");
    FAIL("expected a read error");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("image.png") != std::string::npos);
  }
}
