#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/LU>
#include <doctest.h>

#include "ifvc/errors.hpp"
#include "ifvc/face_geometry.hpp"
#include "ifvc/morphable_model.hpp"
#include "test_support.hpp"

using namespace ifvc;

namespace {

// Rotation oracle written out element by element from the Rx*Ry*Rz product.
Eigen::Matrix3d rotation_oracle(double a, double b, double c) {
  const double ca = std::cos(a), sa = std::sin(a), cb = std::cos(b), sb = std::sin(b), cc = std::cos(c), sc = std::sin(c);
  Eigen::Matrix3d r;
  r << cb * cc, -cb * sc, sb,
      sa * sb * cc + ca * sc, -sa * sb * sc + ca * cc, -sa * cb,
      -ca * sb * cc + sa * sc, ca * sb * sc + sa * cc, ca * cb;
  return r;
}

MorphableModel toy_model() {
  MorphableModel m;
  m.name = "toy";
  m.mean_shape.resize(3, 4);
  m.mean_shape << 0, 1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 0;
  m.mean_texture = Eigen::Matrix3Xd::Constant(3, 4, 0.5);
  m.id_basis = Eigen::MatrixXd::Zero(12, 2);
  m.id_basis(0, 0) = 1.0;
  m.exp_basis = Eigen::MatrixXd::Zero(12, 8);
  for (int k = 0; k < 8; ++k) m.exp_basis(k, k) = 0.5 + k;
  m.alb_basis = Eigen::MatrixXd::Zero(12, 1);
  m.illum_basis = Eigen::MatrixXd::Zero(12, 1);
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  m.eye_regions = {std::vector<int>{0, 1}, std::vector<int>{2, 3}};
  return m;
}

}  // namespace

TEST_CASE("rotation examples") {
  CHECK(rotation_from_euler(0, 0, 0) == Eigen::Matrix3d::Identity());
  const Eigen::Vector3d v = rotation_from_euler(0, std::numbers::pi / 2, 0) * Eigen::Vector3d(1, 0, 0);
  CHECK((v - Eigen::Vector3d(0, 0, -1)).cwiseAbs().maxCoeff() <= 1e-15);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const double a = testing::uniform(rng, -std::numbers::pi, std::numbers::pi);
    const double b = testing::uniform(rng, -std::numbers::pi, std::numbers::pi);
    const double c = testing::uniform(rng, -std::numbers::pi, std::numbers::pi);
    const Eigen::Matrix3d r = rotation_from_euler(a, b, c);
    CHECK((r - rotation_oracle(a, b, c)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(r.determinant() - 1.0) <= 1e-12);
  }
}

TEST_CASE("pose translation includes loc") {
  SemanticVector v;
  v.trans = {0, 0, 2};
  v.loc = 0.5;
  const auto pose = pose_from_semantics(v);
  CHECK(pose.translation == Eigen::Vector3d(0, 0, 2.5));
  CHECK(pose.rotation == Eigen::Matrix3d::Identity());
}

TEST_CASE("pinhole projection examples") {
  CameraIntrinsics cam;
  cam.focal = 1.0;
  RigidPose pose;
  pose.translation = {0, 0, 2};
  Eigen::Matrix3Xd pts(3, 3);
  pts << 0, 1, 0, 0, 0, 0, 0, 0, -5;
  const Mesh m = project(pts, pose, cam);
  CHECK(std::abs(m.projected(0, 0)) <= 1e-12);
  CHECK(std::abs(m.projected(1, 0)) <= 1e-12);
  CHECK(std::abs(m.projected(0, 1) - 0.5) <= 1e-12);
  CHECK(std::abs(m.projected(1, 1)) <= 1e-12);
  CHECK(m.visible == std::vector<std::uint8_t>{1, 1, 0});
  CHECK(std::isnan(m.projected(0, 2)));

  cam.focal = 2.0;
  cam.principal = {3, 4};
  const Mesh m2 = project(pts, pose, cam);
  CHECK(m2.projected(0, 1) - 3 == doctest::Approx(2 * 0.5));

  Eigen::Matrix3Xd behind(3, 2);
  behind << 0, 1, 0, 0, -3, -4;
  CHECK_THROWS_AS(project(behind, pose, CameraIntrinsics{}), DegenerateError);
  CHECK_NOTHROW(project(behind, pose, CameraIntrinsics{}, Visibility::kAllowNone));
}

TEST_CASE("projection shifts with lateral translation") {
  Eigen::Matrix3Xd flat(3, 5);
  flat << 0, 1, -1, 0.5, 2, 0, 1, 2, -1, 0.3, 0, 0, 0, 0, 0;
  const CameraIntrinsics cam = CameraIntrinsics::for_image(256, 256);
  RigidPose pose;
  pose.translation = {0, 0, 3};
  const double z = 3 + cam.distance;
  const Mesh a = project(flat, pose, cam);
  pose.translation.x() += 7.0 * z / cam.focal;
  const Mesh b = project(flat, pose, cam);
  for (int i = 0; i < 5; ++i) CHECK(b.projected(0, i) - a.projected(0, i) == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("shape synthesis on a toy model") {
  const MorphableModel m = toy_model();
  KeyFrameSemantics key;
  CHECK(synthesize_shape(m, key) == m.mean_shape);
  key.id_coeffs = {2, 0};
  Eigen::Matrix3Xd expect = m.mean_shape;
  expect(0, 0) += 2;
  CHECK(synthesize_shape(m, key) == expect);

  key.id_coeffs = {1};
  CHECK_THROWS_AS(synthesize_shape(m, key), DimensionError);
  key.id_coeffs.clear();

  // Inter frame: mouth fills the first six, the rest are zero.
  SemanticVector f;
  f.mouth = {0.1, -0.2, 0.3, 0.4, -0.5, 0.6};
  const Eigen::VectorXd exp = expression_coefficients(m, key, &f);
  REQUIRE(exp.size() == 8);
  for (int i = 0; i < 6; ++i) CHECK(exp[i] == f.mouth[static_cast<std::size_t>(i)]);
  CHECK(exp[6] == 0.0);
  CHECK(exp[7] == 0.0);
  Eigen::Matrix3Xd dense = m.mean_shape;
  for (int r = 0; r < 12; ++r) {
    double s = 0;
    for (int k = 0; k < 8; ++k) s += m.exp_basis(r, k) * exp[k];
    dense(r % 3, r / 3) += s;
  }
  CHECK((synthesize_shape(m, key, &f) - dense).cwiseAbs().maxCoeff() <= 1e-15);

  // Key frame uses its own expression vector.
  key.exp_coeffs = {1, 0, 0, 0, 0, 0, 0, 1};
  const Eigen::Matrix3Xd s = synthesize_shape(m, key);
  CHECK(s(0, 0) == m.mean_shape(0, 0) + 0.5);
  CHECK(s(1, 2) == m.mean_shape(1, 2) + 7.5);
}

TEST_CASE("synthesis is linear") {
  const MorphableModel m = make_synthetic_model();
  std::mt19937_64 rng(3);
  KeyFrameSemantics key;
  for (Eigen::Index i = 0; i < m.id_rank(); ++i) key.id_coeffs.push_back(testing::uniform(rng, -1, 1));
  for (Eigen::Index i = 0; i < m.exp_rank(); ++i) key.exp_coeffs.push_back(testing::uniform(rng, -1, 1));
  const Eigen::Matrix3Xd d1 = synthesize_shape(m, key) - m.mean_shape;
  for (auto& c : key.id_coeffs) c *= 3.0;
  for (auto& c : key.exp_coeffs) c *= 3.0;
  const Eigen::Matrix3Xd d3 = synthesize_shape(m, key) - m.mean_shape;
  CHECK((d3 - 3.0 * d1).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + d3.cwiseAbs().maxCoeff()));

  key.alb_coeffs.assign(static_cast<std::size_t>(m.alb_rank()), 0.0);
  key.illum_coeffs.assign(static_cast<std::size_t>(m.illum_rank()), 0.0);
  CHECK(synthesize_texture(m, key) == m.mean_texture);
}

TEST_CASE("synthetic model and mmb round trip") {
  const MorphableModel m = make_synthetic_model();
  CHECK(m.vertex_count() >= 80);
  CHECK(m.vertex_count() <= 140);
  CHECK(m.exp_rank() == 64);
  CHECK(m.eye_regions[0].size() == 8);
  CHECK(m.triangles.size() > static_cast<std::size_t>(m.vertex_count()));

  const auto again = make_synthetic_model();
  CHECK(again.exp_basis == m.exp_basis);

  const auto bytes = serialize_model(m);
  const MorphableModel p = parse_model(bytes);
  CHECK(p.name == m.name);
  CHECK(p.mean_shape == m.mean_shape);
  CHECK(p.mean_texture == m.mean_texture);
  CHECK(p.id_basis == m.id_basis);
  CHECK(p.exp_basis == m.exp_basis);
  CHECK(p.alb_basis == m.alb_basis);
  CHECK(p.illum_basis == m.illum_basis);
  CHECK(p.triangles == m.triangles);
  CHECK(p.eye_regions == m.eye_regions);

  testing::TempDir dir;
  save_model(m, dir / "m.mmb");
  CHECK(load_model(dir / "m.mmb").exp_basis == m.exp_basis);

  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(parse_model(bad), ParseError);
  auto truncated = bytes;
  truncated.resize(bytes.size() - 8);
  CHECK_THROWS_AS(parse_model(truncated), ParseError);
}

TEST_CASE("shipped model matches the generator") {
  const MorphableModel shipped = load_model(std::string(IFVC_DATA_DIR) + "/models/synthetic_face.mmb");
  const MorphableModel gen = make_synthetic_model();
  CHECK(shipped.exp_basis == gen.exp_basis);
  CHECK(shipped.triangles == gen.triangles);
}

TEST_CASE("default camera frames the synthetic face") {
  const MorphableModel m = make_synthetic_model();
  const auto cam = CameraIntrinsics::for_image(256, 256);
  const Mesh mesh = project(m.mean_shape, RigidPose{}, cam);
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    CHECK(mesh.visible[static_cast<std::size_t>(i)] == 1);
    CHECK(mesh.projected(0, i) > 0);
    CHECK(mesh.projected(0, i) < 256);
    CHECK(mesh.projected(1, i) > 0);
    CHECK(mesh.projected(1, i) < 256);
  }
}
