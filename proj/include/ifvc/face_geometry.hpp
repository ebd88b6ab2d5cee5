#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ifvc/morphable_model.hpp"
#include "ifvc/semantics.hpp"

namespace ifvc {

struct RigidPose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
};

/// R = Rx(pitch) * Ry(yaw) * Rz(roll), angles in radians.
Eigen::Matrix3d rotation_from_euler(double pitch, double yaw, double roll);

/// Rotation from rot; t = (trans_x, trans_y, trans_z + loc).
RigidPose pose_from_semantics(const SemanticVector& v);

/// Pinhole camera. `distance` shifts camera-space depth so a model centred at
/// the origin sits in front of the camera; it is zero for a bare intrinsic
/// matrix.
struct CameraIntrinsics {
  double focal = 1.0;
  Eigen::Vector2d principal = Eigen::Vector2d::Zero();
  int width = 0;
  int height = 0;
  double distance = 0.0;

  /// focal = 1.2 * width, principal at the image centre, distance 10.
  static CameraIntrinsics for_image(int width, int height);
};

struct Mesh {
  Eigen::Matrix3Xd vertices;   // camera space
  Eigen::Matrix2Xd projected;  // pixels, y down; NaN where invisible
  std::vector<std::uint8_t> visible;

  Eigen::Index size() const { return vertices.cols(); }
  bool any_visible() const;
};

/// Expression coefficients used for synthesis: the key frame's full vector,
/// or, for an inter frame, its six mouth values followed by zeros.
Eigen::VectorXd expression_coefficients(const MorphableModel& model, const KeyFrameSemantics& key,
                                        const SemanticVector* frame);

/// S = mean + S_id * id + S_exp * exp. `frame` null means the key frame.
/// Empty key coefficient vectors act as zero vectors; any other length that
/// differs from the basis rank throws DimensionError.
Eigen::Matrix3Xd synthesize_shape(const MorphableModel& model, const KeyFrameSemantics& key,
                                  const SemanticVector* frame = nullptr);
/// T = mean + T_alb * alb + T_illum * illum.
Eigen::Matrix3Xd synthesize_texture(const MorphableModel& model, const KeyFrameSemantics& key);

enum class Visibility { kRequireAny, kAllowNone };

/// Camera-space points R * v + t (+ camera distance on z) projected with
/// (focal * x / z + cx, focal * y / z + cy). Vertices with z <= 0 are marked
/// invisible. Throws DegenerateError when no vertex is visible unless
/// kAllowNone is given.
Mesh project(const Eigen::Matrix3Xd& shape, const RigidPose& pose, const CameraIntrinsics& camera,
             Visibility policy = Visibility::kRequireAny);

}  // namespace ifvc
