#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ifvc {

struct Triangulation {
  /// Counter-clockwise (in a y-up frame) index triples into the input points.
  std::vector<std::array<int, 3>> triangles;
  /// Input indices that were dropped as duplicates of an earlier point.
  std::vector<int> duplicates;
};

/// Delaunay triangulation of scattered 2D points covering their convex hull.
///
/// Coordinates are snapped to a 2^26 grid over the bounding box and all
/// orientation/in-circle decisions are made exactly in integer arithmetic, so
/// collinear and cocircular inputs (regular grids) are handled. Throws
/// DegenerateError when fewer than three distinct points remain or all of them
/// are collinear, and RangeError on non-finite coordinates.
Triangulation delaunay_triangulate(std::span<const Eigen::Vector2d> points);

}  // namespace ifvc
