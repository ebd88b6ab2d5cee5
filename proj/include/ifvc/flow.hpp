#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ifvc/face_geometry.hpp"
#include "ifvc/image.hpp"

namespace ifvc {

/// Dense displacement field sampled at integer pixel positions (x, y).
/// Pixels outside the anchors' convex hull hold (0, 0) and have `fill` set.
struct FlowField {
  int width = 0;
  int height = 0;
  std::vector<Eigen::Vector2d> flow;
  std::vector<std::uint8_t> fill;

  FlowField() = default;
  FlowField(int w, int h);

  Eigen::Vector2d& at(int x, int y) { return flow[static_cast<std::size_t>(y) * width + x]; }
  const Eigen::Vector2d& at(int x, int y) const { return flow[static_cast<std::size_t>(y) * width + x]; }
  bool filled(int x, int y) const { return fill[static_cast<std::size_t>(y) * width + x] != 0; }
};

/// Piecewise-linear interpolation of `values` given at `anchors` over their
/// Delaunay triangulation. Repeated anchor positions keep the first value.
/// Throws DegenerateError when the anchors span no area.
FlowField interpolate_scattered(std::span<const Eigen::Vector2d> anchors, std::span<const Eigen::Vector2d> values,
                                int width, int height);

/// Anchors at the inter frame's projected vertices, displaced by
/// key - inter. Only vertices visible in both meshes take part.
FlowField coarse_flow(const Mesh& key, const Mesh& inter, int width, int height);

/// Backward warp: out(p) = bilinear sample of `image` at p + flow(p), sample
/// coordinates clamped to the image, rounded to nearest.
RgbImage warp_frame(const RgbImage& image, const FlowField& flow);

/// Middlebury .flo: float 202021.25, int32 width, int32 height, then
/// row-major float32 (dx, dy) pairs, little endian.
std::vector<std::uint8_t> serialize_flo(const FlowField& flow);
void write_flo(const FlowField& flow, const std::filesystem::path& path);

}  // namespace ifvc
