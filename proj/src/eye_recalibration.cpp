#include "ifvc/eye_recalibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ifvc/errors.hpp"

namespace ifvc {

namespace {

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

std::size_t EyeMap::count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

double recalibrated_highest_row(double highest, double lowest, double intensity) {
  if (!(intensity >= kEyeMin && intensity <= kEyeMax)) {
    throw RangeError("eye intensity " + std::to_string(intensity) + " outside [0, 5]");
  }
  return lowest - (5.0 - intensity) / 5.0 * std::abs(lowest - highest);
}

std::vector<Eigen::Vector2d> convex_hull(std::vector<Eigen::Vector2d> p) {
  std::sort(p.begin(), p.end(),
            [](const auto& a, const auto& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return {};
  std::vector<Eigen::Vector2d> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  if (h.size() < 3) return {};
  return h;
}

void fill_convex(const std::vector<Eigen::Vector2d>& poly, EyeMap& map) {
  if (poly.size() < 3) return;
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  for (const auto& v : poly) {
    x0 = std::min(x0, v.x());
    x1 = std::max(x1, v.x());
    y0 = std::min(y0, v.y());
    y1 = std::max(y1, v.y());
  }
  const int xa = static_cast<int>(std::max(0.0, std::ceil(x0)));
  const int xb = static_cast<int>(std::min(map.width - 1.0, std::floor(x1)));
  const int ya = static_cast<int>(std::max(0.0, std::ceil(y0)));
  const int yb = static_cast<int>(std::min(map.height - 1.0, std::floor(y1)));
  for (int y = ya; y <= yb; ++y) {
    for (int x = xa; x <= xb; ++x) {
      const Eigen::Vector2d p(x, y);
      bool inside = true;
      for (std::size_t i = 0; i < poly.size() && inside; ++i) {
        inside = cross(poly[i], poly[(i + 1) % poly.size()], p) >= 0.0;
      }
      if (inside) map.mask[static_cast<std::size_t>(y) * map.width + x] = 1;
    }
  }
}

EyeRecalibration recalibrate_eyes(const Mesh& mesh, const MorphableModel& model, double intensity, int width,
                                  int height) {
  if (!(intensity >= kEyeMin && intensity <= kEyeMax)) {
    throw RangeError("eye intensity " + std::to_string(intensity) + " outside [0, 5]");
  }
  if (width < 0 || height < 0) throw DimensionError("negative eye map size");
  EyeRecalibration out;
  out.mesh = mesh;
  out.map.width = width;
  out.map.height = height;
  out.map.mask.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t e = 0; e < 2; ++e) {
    EyeRegion& region = out.eyes[e];
    region.indices = model.eye_regions[e];
    region.highest = region.lowest = region.recalibrated_highest = Eigen::Vector2d::Constant(nan);
    for (const int i : region.indices) {
      if (i < 0 || i >= mesh.size()) throw DimensionError("eye vertex index " + std::to_string(i) + " out of range");
      if (!mesh.visible[static_cast<std::size_t>(i)]) continue;
      const Eigen::Vector2d p = mesh.projected.col(i);
      if (std::isnan(region.highest.y()) || p.y() < region.highest.y()) region.highest = p;
      if (std::isnan(region.lowest.y()) || p.y() > region.lowest.y()) region.lowest = p;
    }
    if (std::isnan(region.highest.y())) continue;
    const double lp = region.lowest.y();
    region.recalibrated_highest = {region.highest.x(), recalibrated_highest_row(region.highest.y(), lp, intensity)};

    const double keep = (5.0 - intensity) / 5.0;
    std::vector<Eigen::Vector2d> moved;
    for (const int i : region.indices) {
      if (!mesh.visible[static_cast<std::size_t>(i)]) continue;
      double& y = out.mesh.projected(1, i);
      if (intensity != 0.0) y = lp - (lp - y) * keep;
      moved.push_back(out.mesh.projected.col(i));
    }
    out.polygons[e] = convex_hull(std::move(moved));
    fill_convex(out.polygons[e], out.map);
  }
  return out;
}

}  // namespace ifvc
