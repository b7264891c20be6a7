#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "bevmap/errors.hpp"
#include "bevmap/geometry.hpp"
#include "bevmap/io/manifest_io.hpp"
#include "bevmap/io/ply_io.hpp"
#include "bevmap/io/trajectory_io.hpp"

using namespace bevmap;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<PointXYZI> random_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> coord(-50.0f, 50.0f);
  std::uniform_real_distribution<float> inten(0.0f, 255.0f);
  std::vector<PointXYZI> pts(n);
  for (PointXYZI& p : pts) {
    p.x = coord(rng);
    p.y = coord(rng);
    p.z = coord(rng);
    p.intensity = inten(rng);
  }
  return pts;
}

}  // namespace

TEST_CASE("binary ply round trips bit-exact") {
  TempDir dir("bevmap_ply_bin");
  const auto pts = random_points(500, 21);
  write_ply(dir.file("m.ply"), pts, true);
  const auto back = read_ply(dir.file("m.ply"));
  REQUIRE(back.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(back[i].x == pts[i].x);
    CHECK(back[i].y == pts[i].y);
    CHECK(back[i].z == pts[i].z);
    CHECK(back[i].intensity == pts[i].intensity);
  }
}

TEST_CASE("ascii ply round trips bit-exact") {
  TempDir dir("bevmap_ply_ascii");
  const auto pts = random_points(100, 22);
  write_ply(dir.file("m.ply"), pts, false);
  const auto back = read_ply(dir.file("m.ply"));
  REQUIRE(back.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(back[i].x == pts[i].x);
    CHECK(back[i].intensity == pts[i].intensity);
  }
}

TEST_CASE("ply reader skips extra properties and accepts double precision") {
  TempDir dir("bevmap_ply_extra");
  std::ofstream out(dir.file("m.ply"));
  out << "ply\nformat ascii 1.0\ncomment synthetic\nelement vertex 2\n"
         "property double x\nproperty double y\nproperty double z\n"
         "property uchar red\nproperty float intensity\nend_header\n"
         "1.5 2.5 3.5 200 40\n-1 -2 -3 10 0.25\n";
  out.close();
  const auto pts = read_ply(dir.file("m.ply"));
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].x == 1.5f);
  CHECK(pts[0].intensity == 40.0f);
  CHECK(pts[1].z == -3.0f);
  CHECK(pts[1].intensity == 0.25f);
}

TEST_CASE("ply reader rejects malformed input with diagnostics") {
  TempDir dir("bevmap_ply_bad");

  std::ofstream(dir.file("notply.ply")) << "solid nope\n";
  CHECK_THROWS_AS(read_ply(dir.file("notply.ply")), IoError);

  std::ofstream(dir.file("nox.ply"))
      << "ply\nformat ascii 1.0\nelement vertex 1\nproperty float y\nend_header\n1\n";
  CHECK_THROWS_AS(read_ply(dir.file("nox.ply")), IoError);

  std::ofstream(dir.file("list.ply"))
      << "ply\nformat ascii 1.0\nelement vertex 1\n"
         "property list uchar int vertex_indices\nproperty float x\nend_header\n";
  CHECK_THROWS_AS(read_ply(dir.file("list.ply")), IoError);

  std::ofstream(dir.file("short.ply"), std::ios::binary)
      << "ply\nformat binary_little_endian 1.0\nelement vertex 5\n"
         "property float x\nproperty float y\nproperty float z\nend_header\nab";
  CHECK_THROWS_AS(read_ply(dir.file("short.ply")), IoError);
}

TEST_CASE("csv round trip and header check") {
  TempDir dir("bevmap_csv");
  const auto pts = random_points(50, 23);
  write_point_csv(dir.file("m.csv"), pts);
  const auto back = read_point_csv(dir.file("m.csv"));
  REQUIRE(back.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(back[i].y == pts[i].y);
  }

  std::ofstream(dir.file("bad.csv")) << "x,y,z\n1,2,3\n";
  CHECK_THROWS_AS(read_point_csv(dir.file("bad.csv")), IoError);

  // dispatch by extension
  CHECK(read_point_file(dir.file("m.csv")).size() == pts.size());
  write_ply(dir.file("m.ply"), pts);
  CHECK(read_point_file(dir.file("m.ply")).size() == pts.size());
}

TEST_CASE("label sidecar round trips") {
  TempDir dir("bevmap_sidecar");
  const std::vector<std::uint8_t> labels = {0, 1, 2, 255, 4, 17};
  write_label_sidecar(dir.file("m_labels.bin"), labels);
  CHECK(read_label_sidecar(dir.file("m_labels.bin")) == labels);
}

TEST_CASE("trajectory file round trips exactly") {
  TempDir dir("bevmap_traj");
  std::vector<Pose> poses;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    Pose p;
    p.timestamp = i / 13.0;
    p.translation = Vec3(unit(rng), unit(rng), unit(rng)) * 40.0;
    p.rotation = Quat(unit(rng), unit(rng), unit(rng), unit(rng)).normalized();
    poses.push_back(p);
  }
  write_trajectory(dir.file("t.txt"), Trajectory(poses));
  const Trajectory back = read_trajectory(dir.file("t.txt"));
  REQUIRE(back.size() == poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    CHECK(back.poses()[i].timestamp == poses[i].timestamp);
    CHECK(back.poses()[i].translation == poses[i].translation);
    CHECK(back.poses()[i].rotation.angularDistance(poses[i].rotation) < 1e-12);
  }
}

TEST_CASE("trajectory parser handles comments and rejects bad lines") {
  TempDir dir("bevmap_traj_bad");
  std::ofstream(dir.file("ok.txt"))
      << "# header comment\n\n0.0 1 2 3 0 0 0 1\n  # indented comment\n1.0 4 5 6 0 0 0 1\n";
  const Trajectory traj = read_trajectory(dir.file("ok.txt"));
  REQUIRE(traj.size() == 2);
  CHECK(traj.poses()[1].translation == Vec3(4, 5, 6));

  std::ofstream(dir.file("short.txt")) << "0.0 1 2 3 0 0 0\n";
  CHECK_THROWS_AS(read_trajectory(dir.file("short.txt")), IoError);

  std::ofstream(dir.file("extra.txt")) << "0.0 1 2 3 0 0 0 1 99\n";
  CHECK_THROWS_AS(read_trajectory(dir.file("extra.txt")), IoError);

  std::ofstream(dir.file("badquat.txt")) << "0.0 1 2 3 0.9 0 0 0.9\n";
  CHECK_THROWS_AS(read_trajectory(dir.file("badquat.txt")), IoError);

  std::ofstream(dir.file("unsorted.txt")) << "1.0 0 0 0 0 0 0 1\n0.5 0 0 0 0 0 0 1\n";
  CHECK_THROWS_AS(read_trajectory(dir.file("unsorted.txt")), IoError);
}

TEST_CASE("manifest resolves relative paths and sorts by timestamp") {
  TempDir dir("bevmap_manifest");
  std::ofstream(dir.file("manifest.json"))
      << R"([{"timestamp": 2.0, "path": "b.png"},
             {"timestamp": 1.0, "path": "a.png"},
             {"timestamp": 3.0, "path": "/abs/c.png"}])";
  const auto entries = read_manifest(dir.file("manifest.json"));
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].timestamp == 1.0);
  CHECK(entries[0].path == (dir.path / "a.png").string());
  CHECK(entries[1].path == (dir.path / "b.png").string());
  CHECK(entries[2].path == "/abs/c.png");

  std::ofstream(dir.file("bad.json")) << R"({"timestamp": 1.0})";
  CHECK_THROWS_AS(read_manifest(dir.file("bad.json")), IoError);
}
