#include "ifvc/face_geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ifvc/errors.hpp"

namespace ifvc {

namespace {

Eigen::VectorXd coefficients_or_zero(const std::vector<double>& values, Eigen::Index rank, const char* what) {
  if (values.empty()) return Eigen::VectorXd::Zero(rank);
  if (static_cast<Eigen::Index>(values.size()) != rank) {
    throw DimensionError(std::string(what) + " has " + std::to_string(values.size()) +
                         " coefficients, model rank is " + std::to_string(rank));
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), rank);
}

Eigen::Matrix3Xd add_basis(const Eigen::Matrix3Xd& mean, const Eigen::MatrixXd& basis, const Eigen::VectorXd& coeffs) {
  const Eigen::VectorXd offset = basis * coeffs;
  return mean + Eigen::Map<const Eigen::Matrix3Xd>(offset.data(), 3, mean.cols());
}

}  // namespace

Eigen::Matrix3d rotation_from_euler(double pitch, double yaw, double roll) {
  const double cx = std::cos(pitch), sx = std::sin(pitch);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cz = std::cos(roll), sz = std::sin(roll);
  Eigen::Matrix3d rx, ry, rz;
  rx << 1, 0, 0, 0, cx, -sx, 0, sx, cx;
  ry << cy, 0, sy, 0, 1, 0, -sy, 0, cy;
  rz << cz, -sz, 0, sz, cz, 0, 0, 0, 1;
  return rx * ry * rz;
}

RigidPose pose_from_semantics(const SemanticVector& v) {
  RigidPose pose;
  pose.rotation = rotation_from_euler(v.rot[0], v.rot[1], v.rot[2]);
  pose.translation = {v.trans[0], v.trans[1], v.trans[2] + v.loc};
  return pose;
}

CameraIntrinsics CameraIntrinsics::for_image(int width, int height) {
  CameraIntrinsics cam;
  cam.focal = 1.2 * width;
  cam.principal = {width / 2.0, height / 2.0};
  cam.width = width;
  cam.height = height;
  cam.distance = 10.0;
  return cam;
}

bool Mesh::any_visible() const {
  for (const auto v : visible) {
    if (v) return true;
  }
  return false;
}

Eigen::VectorXd expression_coefficients(const MorphableModel& model, const KeyFrameSemantics& key,
                                        const SemanticVector* frame) {
  const Eigen::Index rank = model.exp_rank();
  if (frame == nullptr) {
    if (!key.exp_coeffs.empty()) return coefficients_or_zero(key.exp_coeffs, rank, "key expression");
    frame = &key.pose;
  }
  if (rank < static_cast<Eigen::Index>(kMouthDim)) {
    throw DimensionError("expression basis rank " + std::to_string(rank) + " is below the 6 mouth components");
  }
  Eigen::VectorXd exp = Eigen::VectorXd::Zero(rank);
  for (std::size_t i = 0; i < kMouthDim; ++i) exp[static_cast<Eigen::Index>(i)] = frame->mouth[i];
  return exp;
}

Eigen::Matrix3Xd synthesize_shape(const MorphableModel& model, const KeyFrameSemantics& key,
                                  const SemanticVector* frame) {
  const Eigen::VectorXd id = coefficients_or_zero(key.id_coeffs, model.id_rank(), "identity");
  const Eigen::VectorXd exp = expression_coefficients(model, key, frame);
  const Eigen::VectorXd offset = model.id_basis * id + model.exp_basis * exp;
  return model.mean_shape + Eigen::Map<const Eigen::Matrix3Xd>(offset.data(), 3, model.vertex_count());
}

Eigen::Matrix3Xd synthesize_texture(const MorphableModel& model, const KeyFrameSemantics& key) {
  const Eigen::VectorXd alb = coefficients_or_zero(key.alb_coeffs, model.alb_rank(), "albedo");
  const Eigen::VectorXd illum = coefficients_or_zero(key.illum_coeffs, model.illum_rank(), "illumination");
  return add_basis(add_basis(model.mean_texture, model.alb_basis, alb), model.illum_basis, illum);
}

Mesh project(const Eigen::Matrix3Xd& shape, const RigidPose& pose, const CameraIntrinsics& camera,
             Visibility policy) {
  if (!(camera.focal > 0.0)) throw RangeError("camera focal length must be positive");
  Mesh mesh;
  mesh.vertices = (pose.rotation * shape).colwise() + pose.translation;
  mesh.vertices.row(2).array() += camera.distance;
  mesh.projected.resize(2, shape.cols());
  mesh.visible.assign(static_cast<std::size_t>(shape.cols()), 0);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index i = 0; i < shape.cols(); ++i) {
    const double z = mesh.vertices(2, i);
    if (z > 0.0 && std::isfinite(z)) {
      mesh.projected(0, i) = camera.focal * mesh.vertices(0, i) / z + camera.principal.x();
      mesh.projected(1, i) = camera.focal * mesh.vertices(1, i) / z + camera.principal.y();
      mesh.visible[static_cast<std::size_t>(i)] =
          std::isfinite(mesh.projected(0, i)) && std::isfinite(mesh.projected(1, i));
    } else {
      mesh.projected.col(i).setConstant(nan);
    }
  }
  if (policy == Visibility::kRequireAny && !mesh.any_visible()) {
    throw DegenerateError("every vertex lies behind the camera");
  }
  return mesh;
}

}  // namespace ifvc
