#include "bevmap/io/grid_io.hpp"

#include <bit>
#include <fstream>

#include <nlohmann/json.hpp>

#include "bevmap/errors.hpp"
#include "bevmap/io/png_io.hpp"

static_assert(std::endian::native == std::endian::little,
              "raster I/O assumes a little-endian host");

namespace bevmap {

namespace {

using nlohmann::json;

void write_channel_bin(const std::string& path, const std::vector<double>& values,
                       std::size_t cells, int channel) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  std::vector<float> plane(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    plane[i] = static_cast<float>(values[i * LabelSet::kNumChannels + channel]);
  }
  out.write(reinterpret_cast<const char*>(plane.data()),
            static_cast<std::streamsize>(plane.size() * sizeof(float)));
  if (!out) throw IoError("write failed: " + path);
}

std::vector<float> read_channel_bin(const std::string& path, std::size_t cells) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<float> plane(cells);
  in.read(reinterpret_cast<char*>(plane.data()),
          static_cast<std::streamsize>(cells * sizeof(float)));
  if (static_cast<std::size_t>(in.gcount()) != cells * sizeof(float)) {
    throw IoError(path + ": expected " + std::to_string(cells * sizeof(float)) + " bytes");
  }
  return plane;
}

std::string channel_bin_path(const std::string& base, const char* kind, int channel) {
  return base + "_" + kind + "_c" + std::to_string(channel) + ".bin";
}

}  // namespace

void save_grid_meta(const std::string& sidecar_path, const SemanticGrid& grid,
                    const LabelSet& labels) {
  json sidecar{
      {"frame", grid.frame() == GridFrame::kLocal ? "local" : "global"},
      {"origin", {grid.x0(), grid.y0()}},
      {"d", grid.resolution()},
      {"H", grid.height()},
      {"W", grid.width()},
      {"C", grid.channels()},
      {"channel_names", labels.channel_names()},
  };
  if (grid.frame() == GridFrame::kLocal) {
    const Pose& a = grid.anchor();
    sidecar["anchor"] = {
        {"timestamp", a.timestamp},
        {"translation", {a.translation.x(), a.translation.y(), a.translation.z()}},
        {"rotation_qxyzw", {a.rotation.x(), a.rotation.y(), a.rotation.z(), a.rotation.w()}},
    };
  }
  std::ofstream out(sidecar_path);
  if (!out) throw IoError("cannot open for writing: " + sidecar_path);
  out << sidecar.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + sidecar_path);
}

void save_grid(const std::string& base, const SemanticGrid& grid, const LabelSet& labels) {
  save_grid_meta(base + ".json", grid, labels);

  const std::size_t cells = static_cast<std::size_t>(grid.height()) * grid.width();
  const std::vector<double> post = grid.posterior();
  for (int c = 0; c < grid.channels(); ++c) {
    write_channel_bin(channel_bin_path(base, "logprob", c), grid.raw_logprob(), cells, c);
    write_channel_bin(channel_bin_path(base, "prob", c), post, cells, c);
  }

  SemanticImage mask(grid.width(), grid.height(), 0);
  for (std::size_t i = 0; i < cells; ++i) mask.labels[i] = grid.raw_observed()[i] ? 255 : 0;
  write_gray_png(base + "_observed.png", mask);
}

GridMeta load_grid_meta(const std::string& sidecar_path) {
  std::ifstream in(sidecar_path);
  if (!in) throw IoError("cannot open: " + sidecar_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw IoError(sidecar_path + ": " + ex.what());
  }
  GridMeta meta;
  try {
    const std::string frame = j.at("frame").get<std::string>();
    if (frame == "local") {
      meta.frame = GridFrame::kLocal;
    } else if (frame == "global") {
      meta.frame = GridFrame::kGlobal;
    } else {
      throw IoError(sidecar_path + ": frame must be 'local' or 'global'");
    }
    const auto origin = j.at("origin").get<std::vector<double>>();
    if (origin.size() != 2) throw IoError(sidecar_path + ": origin must be [x, y]");
    meta.x0 = origin[0];
    meta.y0 = origin[1];
    meta.d = j.at("d").get<double>();
    meta.height = j.at("H").get<int>();
    meta.width = j.at("W").get<int>();
    const int channels = j.at("C").get<int>();
    if (channels != LabelSet::kNumChannels) {
      throw IoError(sidecar_path + ": expected " + std::to_string(LabelSet::kNumChannels) +
                    " channels, found " + std::to_string(channels));
    }
    meta.channel_names = j.at("channel_names").get<std::vector<std::string>>();
    if (meta.frame == GridFrame::kLocal) {
      const json& a = j.at("anchor");
      meta.anchor.timestamp = a.at("timestamp").get<double>();
      const auto t = a.at("translation").get<std::vector<double>>();
      const auto q = a.at("rotation_qxyzw").get<std::vector<double>>();
      if (t.size() != 3 || q.size() != 4) throw IoError(sidecar_path + ": malformed anchor");
      meta.anchor.translation = Vec3(t[0], t[1], t[2]);
      meta.anchor.rotation = Quat(q[3], q[0], q[1], q[2]);
    }
  } catch (const json::exception& ex) {
    throw IoError(sidecar_path + ": " + ex.what());
  }
  return meta;
}

SemanticGrid grid_like(const GridMeta& meta) {
  if (meta.frame == GridFrame::kLocal) {
    return SemanticGrid::local(meta.anchor, meta.x0, meta.y0, meta.height, meta.width, meta.d);
  }
  return SemanticGrid::global(meta.x0, meta.y0, meta.height, meta.width, meta.d);
}

SemanticGrid load_grid(const std::string& base) {
  const GridMeta meta = load_grid_meta(base + ".json");
  SemanticGrid grid = grid_like(meta);

  const std::size_t cells = static_cast<std::size_t>(meta.height) * meta.width;
  std::vector<std::vector<float>> planes;
  planes.reserve(LabelSet::kNumChannels);
  for (int c = 0; c < LabelSet::kNumChannels; ++c) {
    planes.push_back(read_channel_bin(channel_bin_path(base, "logprob", c), cells));
  }

  const SemanticImage mask = read_gray_png(base + "_observed.png");
  if (mask.width != meta.width || mask.height != meta.height) {
    throw IoError(base + "_observed.png: size does not match sidecar");
  }

  std::vector<double> state(LabelSet::kNumChannels);
  for (int r = 0; r < meta.height; ++r) {
    for (int c = 0; c < meta.width; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * meta.width + c;
      for (int ch = 0; ch < LabelSet::kNumChannels; ++ch) state[ch] = planes[ch][i];
      grid.set_state(Cell{r, c}, state, mask.labels[i] != 0);
    }
  }
  return grid;
}

void write_label_raster_png(const std::string& path, const LabelRaster& raster) {
  SemanticImage img;
  img.width = raster.width;
  img.height = raster.height;
  img.labels = raster.labels;
  write_gray_png(path, img);
}

LabelRaster read_label_raster_png(const std::string& path) {
  const SemanticImage img = read_gray_png(path);
  LabelRaster raster;
  raster.width = img.width;
  raster.height = img.height;
  raster.labels = img.labels;
  return raster;
}

RgbImage render_label_raster(const LabelRaster& raster, const LabelSet& labels) {
  RgbImage img(raster.width, raster.height);
  for (int r = 0; r < raster.height; ++r) {
    for (int c = 0; c < raster.width; ++c) {
      const std::uint8_t v = raster.at(r, c);
      if (v == LabelRaster::kUnknown) continue;
      const auto rgb = labels.channel_color(v);
      std::uint8_t* px = img.px(c, r);
      px[0] = rgb[0];
      px[1] = rgb[1];
      px[2] = rgb[2];
    }
  }
  return img;
}

}  // namespace bevmap
