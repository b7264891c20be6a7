#include "bevmap/io/ply_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bevmap/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary PLY I/O assumes a little-endian host");

namespace bevmap {

namespace {

enum class PlyType { kFloat, kDouble, kChar, kUchar, kShort, kUshort, kInt, kUint };

std::size_t type_size(PlyType t) {
  switch (t) {
    case PlyType::kChar:
    case PlyType::kUchar:
      return 1;
    case PlyType::kShort:
    case PlyType::kUshort:
      return 2;
    case PlyType::kInt:
    case PlyType::kUint:
    case PlyType::kFloat:
      return 4;
    case PlyType::kDouble:
      return 8;
  }
  return 0;
}

PlyType parse_type(const std::string& name, const std::string& path, int line_no) {
  if (name == "float" || name == "float32") return PlyType::kFloat;
  if (name == "double" || name == "float64") return PlyType::kDouble;
  if (name == "char" || name == "int8") return PlyType::kChar;
  if (name == "uchar" || name == "uint8") return PlyType::kUchar;
  if (name == "short" || name == "int16") return PlyType::kShort;
  if (name == "ushort" || name == "uint16") return PlyType::kUshort;
  if (name == "int" || name == "int32") return PlyType::kInt;
  if (name == "uint" || name == "uint32") return PlyType::kUint;
  throw IoError(path + ":" + std::to_string(line_no) + ": unsupported PLY property type '" +
                name + "'");
}

float binary_value_as_float(const char* bytes, PlyType t) {
  switch (t) {
    case PlyType::kFloat: {
      float f;
      std::memcpy(&f, bytes, 4);
      return f;
    }
    case PlyType::kDouble: {
      double d;
      std::memcpy(&d, bytes, 8);
      return static_cast<float>(d);
    }
    case PlyType::kChar:
      return static_cast<float>(*reinterpret_cast<const std::int8_t*>(bytes));
    case PlyType::kUchar:
      return static_cast<float>(*reinterpret_cast<const std::uint8_t*>(bytes));
    case PlyType::kShort: {
      std::int16_t v;
      std::memcpy(&v, bytes, 2);
      return static_cast<float>(v);
    }
    case PlyType::kUshort: {
      std::uint16_t v;
      std::memcpy(&v, bytes, 2);
      return static_cast<float>(v);
    }
    case PlyType::kInt: {
      std::int32_t v;
      std::memcpy(&v, bytes, 4);
      return static_cast<float>(v);
    }
    case PlyType::kUint: {
      std::uint32_t v;
      std::memcpy(&v, bytes, 4);
      return static_cast<float>(v);
    }
  }
  return 0.0f;
}

struct PlyHeader {
  bool binary = false;
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::string, PlyType>> vertex_props;
  // elements other than "vertex" that appear after it must be skipped; we
  // only support them at end-of-file for ASCII (ignored) and reject lists
  std::size_t header_end = 0;
};

PlyHeader parse_header(std::istream& in, const std::string& path) {
  PlyHeader header;
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "ply") throw IoError(path + ":1: missing 'ply' magic");
  bool format_seen = false;
  std::string current_element;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "comment" || tok == "obj_info" || tok.empty()) continue;
    if (tok == "format") {
      std::string fmt, version;
      ls >> fmt >> version;
      if (fmt == "ascii") {
        header.binary = false;
      } else if (fmt == "binary_little_endian") {
        header.binary = true;
      } else {
        throw IoError(path + ":" + std::to_string(line_no) + ": unsupported PLY format '" +
                      fmt + "'");
      }
      format_seen = true;
    } else if (tok == "element") {
      std::string name;
      std::size_t count = 0;
      ls >> name >> count;
      current_element = name;
      if (name == "vertex") header.vertex_count = count;
    } else if (tok == "property") {
      if (current_element != "vertex") continue;
      std::string type_name;
      ls >> type_name;
      if (type_name == "list") {
        throw IoError(path + ":" + std::to_string(line_no) +
                      ": list properties are not supported on vertex elements");
      }
      std::string prop_name;
      ls >> prop_name;
      header.vertex_props.emplace_back(prop_name, parse_type(type_name, path, line_no));
    } else if (tok == "end_header") {
      if (!format_seen) throw IoError(path + ": missing format line in PLY header");
      return header;
    } else {
      throw IoError(path + ":" + std::to_string(line_no) + ": unrecognized header token '" +
                    tok + "'");
    }
  }
  throw IoError(path + ": PLY header not terminated by end_header");
}

}  // namespace

std::vector<PointXYZI> read_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  const PlyHeader header = parse_header(in, path);

  int ix = -1, iy = -1, iz = -1, ii = -1;
  for (std::size_t p = 0; p < header.vertex_props.size(); ++p) {
    const std::string& name = header.vertex_props[p].first;
    if (name == "x") ix = static_cast<int>(p);
    else if (name == "y") iy = static_cast<int>(p);
    else if (name == "z") iz = static_cast<int>(p);
    else if (name == "intensity") ii = static_cast<int>(p);
  }
  if (ix < 0 || iy < 0 || iz < 0) {
    throw IoError(path + ": PLY vertex element lacks x/y/z properties");
  }

  std::vector<PointXYZI> points;
  points.reserve(header.vertex_count);

  if (header.binary) {
    std::size_t record_size = 0;
    std::vector<std::size_t> offsets;
    for (const auto& [name, type] : header.vertex_props) {
      offsets.push_back(record_size);
      record_size += type_size(type);
    }
    std::vector<char> record(record_size);
    for (std::size_t v = 0; v < header.vertex_count; ++v) {
      if (!in.read(record.data(), static_cast<std::streamsize>(record_size))) {
        throw IoError(path + ": truncated binary PLY at vertex " + std::to_string(v));
      }
      PointXYZI pt;
      pt.x = binary_value_as_float(record.data() + offsets[ix], header.vertex_props[ix].second);
      pt.y = binary_value_as_float(record.data() + offsets[iy], header.vertex_props[iy].second);
      pt.z = binary_value_as_float(record.data() + offsets[iz], header.vertex_props[iz].second);
      if (ii >= 0) {
        pt.intensity =
            binary_value_as_float(record.data() + offsets[ii], header.vertex_props[ii].second);
      }
      points.push_back(pt);
    }
  } else {
    std::string line;
    std::size_t v = 0;
    std::vector<double> values(header.vertex_props.size());
    while (v < header.vertex_count) {
      if (!std::getline(in, line)) {
        throw IoError(path + ": truncated ASCII PLY at vertex " + std::to_string(v));
      }
      if (line.empty()) continue;
      std::istringstream ls(line);
      for (std::size_t p = 0; p < values.size(); ++p) {
        if (!(ls >> values[p])) {
          throw IoError(path + ": malformed ASCII PLY vertex " + std::to_string(v));
        }
      }
      PointXYZI pt;
      pt.x = static_cast<float>(values[ix]);
      pt.y = static_cast<float>(values[iy]);
      pt.z = static_cast<float>(values[iz]);
      if (ii >= 0) pt.intensity = static_cast<float>(values[ii]);
      points.push_back(pt);
      ++v;
    }
  }
  return points;
}

void write_ply(const std::string& path, const std::vector<PointXYZI>& points, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "ply\n"
      << (binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n")
      << "element vertex " << points.size() << "\n"
      << "property float x\nproperty float y\nproperty float z\nproperty float intensity\n"
      << "end_header\n";
  if (binary) {
    for (const PointXYZI& p : points) {
      float buf[4] = {p.x, p.y, p.z, p.intensity};
      out.write(reinterpret_cast<const char*>(buf), sizeof(buf));
    }
  } else {
    char line[128];
    for (const PointXYZI& p : points) {
      std::snprintf(line, sizeof(line), "%.9g %.9g %.9g %.9g\n", p.x, p.y, p.z, p.intensity);
      out << line;
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<PointXYZI> read_point_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y,z,intensity") {
    throw IoError(path + ":1: expected header 'x,y,z,intensity'");
  }
  std::vector<PointXYZI> points;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    PointXYZI p;
    char extra;
    std::istringstream ls(line);
    char c1, c2, c3;
    if (!(ls >> p.x >> c1 >> p.y >> c2 >> p.z >> c3 >> p.intensity) || c1 != ',' ||
        c2 != ',' || c3 != ',' || (ls >> extra)) {
      throw IoError(path + ":" + std::to_string(line_no) + ": malformed CSV point line");
    }
    points.push_back(p);
  }
  return points;
}

void write_point_csv(const std::string& path, const std::vector<PointXYZI>& points) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "x,y,z,intensity\n";
  char line[160];
  for (const PointXYZI& p : points) {
    std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g,%.9g\n", p.x, p.y, p.z, p.intensity);
    out << line;
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<PointXYZI> read_point_file(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    return read_point_csv(path);
  }
  return read_ply(path);
}

std::vector<std::uint8_t> read_label_sidecar(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void write_label_sidecar(const std::string& path, const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace bevmap
