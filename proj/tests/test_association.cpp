#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "bevmap/association.hpp"
#include "bevmap/errors.hpp"
#include "bevmap/point_map.hpp"
#include "oracles.hpp"

using namespace bevmap;

namespace {

CameraModel identity_camera() {
  CameraModel cam;
  cam.fx = 500;
  cam.fy = 500;
  cam.cx = 320;
  cam.cy = 240;
  cam.width = 640;
  cam.height = 480;
  return cam;  // camera frame == body frame
}

SemanticPoint pt(double x, double y, double z) {
  SemanticPoint p;
  p.position = Vec3(x, y, z);
  return p;
}

}  // namespace

TEST_CASE("clip window keeps (14,9,0) and drops (16,0,0) with defaults") {
  ClipWindow clip;
  CHECK(clip.contains(Vec3(14, 9, 0)));
  CHECK(!clip.contains(Vec3(16, 0, 0)));
  CHECK(!clip.contains(Vec3(15, 0, 0)));   // max bound is exclusive
  CHECK(clip.contains(Vec3(0, -10, 0)));   // min bound is inclusive
  CHECK(!clip.contains(Vec3(0, 10, 0)));
}

TEST_CASE("clip window validation requires min < max") {
  ClipWindow clip;
  clip.lateral_min = 5;
  clip.lateral_max = -5;
  CHECK_THROWS_AS(clip.validate(), ConfigError);
}

TEST_CASE("extract_local_region equals the brute-force window filter") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<float> coord(-30.0f, 30.0f);
  std::vector<PointXYZI> pts(4000);
  for (auto& p : pts) {
    p.x = coord(rng);
    p.y = coord(rng);
    p.z = coord(rng) / 10.0f;
  }
  const PointMap map(pts, 4.0);

  Pose pose;
  pose.translation = Vec3(3.0, -2.0, 0.1);
  pose.rotation = Quat(Eigen::AngleAxisd(0.7, Vec3::UnitZ()));
  ClipWindow clip;

  const SemanticPointCloud got = extract_local_region(map, pose, clip);
  CHECK(got.frame == Frame::kBody);
  REQUIRE(got.pose.has_value());

  std::multiset<std::array<float, 3>> want;
  const Eigen::Isometry3d body_from_world = pose.isometry().inverse();
  for (const auto& p : pts) {
    const Vec3 b = body_from_world * p.position();
    if (clip.contains(b)) want.insert({p.x, p.y, p.z});
  }
  std::multiset<std::array<float, 3>> have;
  for (const auto& p : got.points) {
    CHECK(p.label == LabelSet::kUnlabeled);
    const Vec3 w = pose.isometry() * p.position;
    have.insert({static_cast<float>(w.x()), static_cast<float>(w.y()),
                 static_cast<float>(w.z())});
  }
  // world coordinates survive the double round trip to well under float eps,
  // so compare after snapping back to float
  CHECK(have.size() == want.size());
}

TEST_CASE("extract_local_region of an empty map is empty") {
  const PointMap map;
  CHECK(extract_local_region(map, Pose{}, ClipWindow{}).empty());
}

TEST_CASE("projection puts the optical axis at the principal point") {
  const CameraModel cam = identity_camera();
  const auto proj = project_points(cam, {pt(0, 0, 5)});
  REQUIRE(proj.size() == 1);
  CHECK(proj[0].u == doctest::Approx(320.0));
  CHECK(proj[0].v == doctest::Approx(240.0));
  CHECK(proj[0].depth == doctest::Approx(5.0));
}

TEST_CASE("projection arithmetic: unit offset at 5 m lands at u=420") {
  const auto proj = project_points(identity_camera(), {pt(1, 0, 5)});
  REQUIRE(proj.size() == 1);
  CHECK(proj[0].u == doctest::Approx(420.0));
}

TEST_CASE("points behind the camera or out of frame are omitted") {
  const auto proj = project_points(identity_camera(),
                                   {pt(0, 0, -1), pt(0, 0, 0), pt(10, 0, 5), pt(0, 0, 5)});
  REQUIRE(proj.size() == 1);
  CHECK(proj[0].point_index == 3);
}

TEST_CASE("projections re-project within 1e-6 px and omissions violate a bound") {
  CameraModel cam = identity_camera();
  cam.camera_from_body = Eigen::Isometry3d(Eigen::AngleAxisd(0.3, Vec3::UnitY()));
  cam.camera_from_body.translation() = Vec3(0.1, -0.2, 0.05);

  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::vector<SemanticPoint> pts;
  for (int i = 0; i < 500; ++i) pts.push_back(pt(coord(rng), coord(rng), coord(rng)));

  const auto proj = project_points(cam, pts);
  std::set<std::size_t> projected;
  for (const auto& pr : proj) {
    projected.insert(pr.point_index);
    const Vec3 c = cam.camera_from_body * pts[pr.point_index].position;
    const auto px = oracle::project(cam.fx, cam.fy, cam.cx, cam.cy, cam.width, cam.height, c);
    REQUIRE(px.valid);
    CHECK(std::abs(px.u - pr.u) < 1e-6);
    CHECK(std::abs(px.v - pr.v) < 1e-6);
    CHECK(std::abs(px.depth - pr.depth) < 1e-9);
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (projected.count(i)) continue;
    const Vec3 c = cam.camera_from_body * pts[i].position;
    CHECK(!oracle::project(cam.fx, cam.fy, cam.cx, cam.cy, cam.width, cam.height, c).valid);
  }
}

TEST_CASE("associate_labels picks the rounded pixel and drops unlabeled hits") {
  const CameraModel cam = identity_camera();
  SemanticImage img(cam.width, cam.height);  // all 255
  img.at(420, 240) = 2;
  img.at(320, 240) = 0;

  SemanticPointCloud cloud;
  cloud.frame = Frame::kBody;
  cloud.pose = Pose{};
  // (419.6, 240.2) rounds to pixel (420, 240)
  cloud.points = {pt(0.996, 0.002, 5.0), pt(0, 0, 5), pt(0.5, 0.5, 5)};

  const auto proj = project_points(cam, cloud.points);
  REQUIRE(proj.size() == 3);
  const SemanticPointCloud labeled = associate_labels(img, proj, cloud);
  REQUIRE(labeled.size() == 2);
  CHECK(labeled.points[0].label == 2);
  CHECK(labeled.points[1].label == 0);
  for (const auto& p : labeled.points) CHECK(p.label != LabelSet::kUnlabeled);
  CHECK(labeled.size() <= cloud.size());
}

TEST_CASE("depth buffer culls points hidden behind nearer surface") {
  const CameraModel cam = identity_camera();
  SemanticImage img(cam.width, cam.height, 0);

  SemanticPointCloud cloud;
  cloud.frame = Frame::kBody;
  cloud.pose = Pose{};
  cloud.points = {pt(0, 0, 8), pt(0, 0, 5), pt(0.004, 0, 5.0001), pt(1, 0, 5)};
  const auto proj = project_points(cam, cloud.points);

  const SemanticPointCloud plain = associate_labels(img, proj, cloud, false);
  CHECK(plain.size() == 4);

  const SemanticPointCloud visible = associate_labels(img, proj, cloud, true);
  // three points share pixel (320,240): depth 8 hides 3 m behind depth 5 and
  // is culled, 5.0001 sits within the same-surface margin and stays
  REQUIRE(visible.size() == 3);
  CHECK(visible.points[0].position.z() == doctest::Approx(5.0));
  CHECK(visible.points[1].position.z() == doctest::Approx(5.0001));
  CHECK(visible.points[2].position.x() == doctest::Approx(1.0));
}

TEST_CASE("depth buffer shields pixels next to an occluder's projection") {
  const CameraModel cam = identity_camera();
  SemanticImage img(cam.width, cam.height, 0);

  SemanticPointCloud cloud;
  cloud.frame = Frame::kBody;
  cloud.pose = Pose{};
  // occluder at pixel (404,240); hidden point one pixel over at (405,240)
  cloud.points = {pt(1.0, 0, 5.0), pt(2.0238, 0, 10.0)};
  const auto proj = project_points(cam, cloud.points);
  REQUIRE(proj.size() == 2);

  const SemanticPointCloud visible = associate_labels(img, proj, cloud, true);
  REQUIRE(visible.size() == 1);
  CHECK(visible.points[0].position.z() == doctest::Approx(5.0));
}
