#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ifvc {

/// Linear 3D face model. Shapes are 3 x N (one column per vertex); bases
/// are 3N x rank with row 3 * vertex + axis.
struct MorphableModel {
  std::string name;
  Eigen::Matrix3Xd mean_shape;
  Eigen::Matrix3Xd mean_texture;
  Eigen::MatrixXd id_basis;
  Eigen::MatrixXd exp_basis;
  Eigen::MatrixXd alb_basis;
  Eigen::MatrixXd illum_basis;
  std::vector<std::array<int, 3>> triangles;
  std::array<std::vector<int>, 2> eye_regions;  // left, right

  Eigen::Index vertex_count() const { return mean_shape.cols(); }
  Eigen::Index id_rank() const { return id_basis.cols(); }
  Eigen::Index exp_rank() const { return exp_basis.cols(); }
  Eigen::Index alb_rank() const { return alb_basis.cols(); }
  Eigen::Index illum_rank() const { return illum_basis.cols(); }
};

/// Throws DimensionError when bases, triangles or eye sets are inconsistent.
void validate(const MorphableModel& model);

// .mmb layout: "MMB1" | u32 header length | JSON header | float64 blob.
// The JSON header holds name, dims, triangles, eye index sets and, per
// array, its shape and byte offset in the blob (little endian, column major).
std::vector<std::uint8_t> serialize_model(const MorphableModel& model);
MorphableModel parse_model(std::span<const std::uint8_t> bytes);
MorphableModel load_model(const std::filesystem::path& path);
void save_model(const MorphableModel& model, const std::filesystem::path& path);

/// Deterministic face-shaped toy model (130 vertices, 64 expression
/// components whose first six drive the mouth) for tests and demos.
MorphableModel make_synthetic_model();

}  // namespace ifvc
