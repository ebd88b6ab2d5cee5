#include "ifvc/flow.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "ifvc/delaunay.hpp"
#include "ifvc/errors.hpp"
#include "ifvc/file_io.hpp"

namespace ifvc {

namespace {

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f32(std::vector<std::uint8_t>& out, double v) { put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v))); }

}  // namespace

FlowField::FlowField(int w, int h) : width(w), height(h) {
  if (w < 0 || h < 0) throw DimensionError("negative flow size");
  const auto n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  flow.assign(n, Eigen::Vector2d::Zero());
  fill.assign(n, 1);
}

FlowField interpolate_scattered(std::span<const Eigen::Vector2d> anchors, std::span<const Eigen::Vector2d> values,
                                int width, int height) {
  if (anchors.size() != values.size()) throw DimensionError("anchor and value counts differ");
  FlowField field(width, height);
  const Triangulation tri = delaunay_triangulate(anchors);

  for (const auto& t : tri.triangles) {
    const Eigen::Vector2d& a = anchors[static_cast<std::size_t>(t[0])];
    const Eigen::Vector2d& b = anchors[static_cast<std::size_t>(t[1])];
    const Eigen::Vector2d& c = anchors[static_cast<std::size_t>(t[2])];
    const double area = cross(a, b, c);
    if (!(area > 0.0)) continue;  // collapsed after rounding; neighbours cover it
    const double x0 = std::min({a.x(), b.x(), c.x()}), x1 = std::max({a.x(), b.x(), c.x()});
    const double y0 = std::min({a.y(), b.y(), c.y()}), y1 = std::max({a.y(), b.y(), c.y()});
    if (x1 < 0 || y1 < 0 || x0 > width - 1 || y0 > height - 1) continue;
    const int xa = static_cast<int>(std::ceil(std::max(x0, 0.0)));
    const int xb = static_cast<int>(std::floor(std::min(x1, width - 1.0)));
    const int ya = static_cast<int>(std::ceil(std::max(y0, 0.0)));
    const int yb = static_cast<int>(std::floor(std::min(y1, height - 1.0)));
    const Eigen::Vector2d& da = values[static_cast<std::size_t>(t[0])];
    const Eigen::Vector2d& db = values[static_cast<std::size_t>(t[1])];
    const Eigen::Vector2d& dc = values[static_cast<std::size_t>(t[2])];
    for (int y = ya; y <= yb; ++y) {
      for (int x = xa; x <= xb; ++x) {
        const std::size_t idx = static_cast<std::size_t>(y) * width + x;
        if (!field.fill[idx]) continue;  // first triangle wins on shared edges
        const Eigen::Vector2d p(x, y);
        const double la = cross(p, b, c), lb = cross(p, c, a), lc = cross(p, a, b);
        if (la < 0.0 || lb < 0.0 || lc < 0.0) continue;
        field.flow[idx] = (la / area) * da + (lb / area) * db + (lc / area) * dc;
        field.fill[idx] = 0;
      }
    }
  }
  return field;
}

FlowField coarse_flow(const Mesh& key, const Mesh& inter, int width, int height) {
  if (key.size() != inter.size()) throw DimensionError("key and inter meshes have different vertex counts");
  std::vector<Eigen::Vector2d> anchors, disp;
  for (Eigen::Index i = 0; i < inter.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (!key.visible[k] || !inter.visible[k]) continue;
    anchors.emplace_back(inter.projected.col(i));
    disp.emplace_back(key.projected.col(i) - inter.projected.col(i));
  }
  return interpolate_scattered(anchors, disp, width, height);
}

RgbImage warp_frame(const RgbImage& image, const FlowField& flow) {
  if (image.width != flow.width || image.height != flow.height) {
    throw DimensionError("image is " + std::to_string(image.width) + "x" + std::to_string(image.height) +
                         ", flow is " + std::to_string(flow.width) + "x" + std::to_string(flow.height));
  }
  RgbImage out(image.width, image.height);
  if (image.width == 0 || image.height == 0) return out;
  const double xmax = image.width - 1.0, ymax = image.height - 1.0;
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const Eigen::Vector2d& d = flow.at(x, y);
      double sx = x + d.x(), sy = y + d.y();
      sx = std::isfinite(sx) ? std::clamp(sx, 0.0, xmax) : x;
      sy = std::isfinite(sy) ? std::clamp(sy, 0.0, ymax) : y;
      const int x0 = static_cast<int>(std::floor(sx)), y0 = static_cast<int>(std::floor(sy));
      const int x1 = std::min(x0 + 1, image.width - 1), y1 = std::min(y0 + 1, image.height - 1);
      const double fx = sx - x0, fy = sy - y0;
      const std::uint8_t* p00 = image.at(x0, y0);
      const std::uint8_t* p10 = image.at(x1, y0);
      const std::uint8_t* p01 = image.at(x0, y1);
      const std::uint8_t* p11 = image.at(x1, y1);
      std::uint8_t* o = out.at(x, y);
      for (int c = 0; c < 3; ++c) {
        const double top = p00[c] * (1.0 - fx) + p10[c] * fx;
        const double bottom = p01[c] * (1.0 - fx) + p11[c] * fx;
        const double v = top * (1.0 - fy) + bottom * fy;
        o[c] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> serialize_flo(const FlowField& flow) {
  std::vector<std::uint8_t> out;
  out.reserve(12 + flow.flow.size() * 8);
  put_f32(out, 202021.25);
  put_u32(out, static_cast<std::uint32_t>(flow.width));
  put_u32(out, static_cast<std::uint32_t>(flow.height));
  for (const auto& d : flow.flow) {
    put_f32(out, d.x());
    put_f32(out, d.y());
  }
  return out;
}

void write_flo(const FlowField& flow, const std::filesystem::path& path) { write_file_bytes(path, serialize_flo(flow)); }

}  // namespace ifvc
