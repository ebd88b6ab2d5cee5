#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "ifvc/face_geometry.hpp"
#include "ifvc/morphable_model.hpp"

namespace ifvc {

/// Per-eye landmarks in pixel coordinates (y down). NaN when no vertex of the
/// region is visible.
struct EyeRegion {
  std::vector<int> indices;
  Eigen::Vector2d highest;               // P_hp: minimum row
  Eigen::Vector2d lowest;                // P_lp: maximum row
  Eigen::Vector2d recalibrated_highest;  // P'_hp
};

/// Binary raster, row major, 1 inside a recalibrated eye polygon.
struct EyeMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> mask;

  bool at(int x, int y) const { return mask[static_cast<std::size_t>(y) * width + x] != 0; }
  std::size_t count() const;
};

struct EyeRecalibration {
  Mesh mesh;  // input mesh with eye vertices moved vertically
  std::array<EyeRegion, 2> eyes;
  std::array<std::vector<Eigen::Vector2d>, 2> polygons;  // convex hulls, may be empty
  EyeMap map;
};

/// P'_hp row for an eye with the given highest/lowest rows and closure
/// intensity (0 open, 5 closed). Throws RangeError outside [0, 5].
double recalibrated_highest_row(double highest, double lowest, double intensity);

/// Moves every visible eye vertex row y to lowest - (lowest - y) * (5 - e) / 5,
/// which maps [P_hp, P_lp] linearly onto [P'_hp, P_lp], then rasterizes the
/// convex hull of each eye at integer pixel centres.
EyeRecalibration recalibrate_eyes(const Mesh& mesh, const MorphableModel& model, double intensity, int width,
                                  int height);

/// Convex hull (monotone chain), counter-clockwise in y-up terms, without
/// collinear points. Fewer than three points or a zero-area hull yields an
/// empty result.
std::vector<Eigen::Vector2d> convex_hull(std::vector<Eigen::Vector2d> points);

/// Fills pixels whose centre lies inside or on a convex polygon.
void fill_convex(const std::vector<Eigen::Vector2d>& polygon, EyeMap& map);

}  // namespace ifvc
