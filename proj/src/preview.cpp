#include "ifvc/preview.hpp"

#include <cmath>
#include <cstdlib>

#include "ifvc/errors.hpp"

namespace ifvc {

namespace {

// Liang-Barsky against [lo, hi]^2 box; false when the segment misses it.
bool clip(Eigen::Vector2d& a, Eigen::Vector2d& b, const Eigen::Vector2d& lo, const Eigen::Vector2d& hi) {
  double t0 = 0.0, t1 = 1.0;
  const Eigen::Vector2d d = b - a;
  const double p[4] = {-d.x(), d.x(), -d.y(), d.y()};
  const double q[4] = {a.x() - lo.x(), hi.x() - a.x(), a.y() - lo.y(), hi.y() - a.y()};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
    } else {
      const double r = q[i] / p[i];
      if (p[i] < 0.0) t0 = std::max(t0, r);
      else t1 = std::min(t1, r);
    }
  }
  if (t0 > t1) return false;
  const Eigen::Vector2d a0 = a;
  a = a0 + t0 * d;
  b = a0 + t1 * d;
  return true;
}

}  // namespace

void draw_line(RgbImage& image, const Eigen::Vector2d& from, const Eigen::Vector2d& to, std::array<std::uint8_t, 3> rgb) {
  if (!from.allFinite() || !to.allFinite()) return;
  Eigen::Vector2d a = from, b = to;
  const double margin = 2.0 * (image.width + image.height) + 2.0;
  const Eigen::Vector2d lo(-margin, -margin), hi(image.width + margin, image.height + margin);
  const bool far = (a.array() < lo.array()).any() || (a.array() > hi.array()).any() ||
                   (b.array() < lo.array()).any() || (b.array() > hi.array()).any();
  if (far && !clip(a, b, lo, hi)) return;
  int x0 = static_cast<int>(std::lround(a.x())), y0 = static_cast<int>(std::lround(a.y()));
  const int x1 = static_cast<int>(std::lround(b.x())), y1 = static_cast<int>(std::lround(b.y()));
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    image.set(x0, y0, rgb);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

RgbImage render_wireframe(const Mesh& mesh, const std::vector<std::array<int, 3>>& triangles,
                          const EyeRecalibration* eyes, int width, int height) {
  RgbImage out(width, height);
  const Mesh& m = eyes ? eyes->mesh : mesh;
  for (const auto& t : triangles) {
    for (int e = 0; e < 3; ++e) {
      const int i = t[static_cast<std::size_t>(e)], j = t[static_cast<std::size_t>((e + 1) % 3)];
      if (i < 0 || j < 0 || i >= m.size() || j >= m.size()) throw DimensionError("triangle index out of range");
      if (!m.visible[static_cast<std::size_t>(i)] || !m.visible[static_cast<std::size_t>(j)]) continue;
      draw_line(out, m.projected.col(i), m.projected.col(j), kEdgeColour);
    }
  }
  if (eyes) {
    if (eyes->map.width == width && eyes->map.height == height) {
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          if (eyes->map.at(x, y)) out.set(x, y, kEyeColour);
        }
      }
    }
    for (const auto& poly : eyes->polygons) {
      for (std::size_t k = 0; k < poly.size(); ++k) draw_line(out, poly[k], poly[(k + 1) % poly.size()], kEyeColour);
    }
  }
  return out;
}

FrameGeometry key_geometry(const MorphableModel& model, const KeyFrameSemantics& key, const CameraIntrinsics& camera) {
  FrameGeometry g;
  g.mesh = project(synthesize_shape(model, key), pose_from_semantics(key.pose), camera, Visibility::kAllowNone);
  g.eyes = recalibrate_eyes(g.mesh, model, key.pose.eye, camera.width, camera.height);
  return g;
}

FrameGeometry inter_geometry(const MorphableModel& model, const KeyFrameSemantics& key, const SemanticVector& frame,
                             const CameraIntrinsics& camera) {
  FrameGeometry g;
  g.mesh = project(synthesize_shape(model, key, &frame), pose_from_semantics(frame), camera, Visibility::kAllowNone);
  g.eyes = recalibrate_eyes(g.mesh, model, frame.eye, camera.width, camera.height);
  return g;
}

RgbImage key_reference_image(const KeyPayload& payload, const MorphableModel& model, const KeyFrameSemantics& key,
                             int width, int height) {
  if (is_png(payload.data)) {
    try {
      RgbImage img = decode_png(payload.data);
      if (img.width == width && img.height == height) return img;
    } catch (const DecodeError&) {
    }
  }
  const auto camera = CameraIntrinsics::for_image(width, height);
  const FrameGeometry g = key_geometry(model, key, camera);
  return render_wireframe(g.mesh, model.triangles, &g.eyes, width, height);
}

RgbImage render_preview(const MorphableModel& model, const KeyFrameSemantics& key, const RgbImage& key_image,
                        const SemanticVector& frame, FlowField* flow_out) {
  const auto camera = CameraIntrinsics::for_image(key_image.width, key_image.height);
  const FrameGeometry k = key_geometry(model, key, camera);
  const FrameGeometry f = inter_geometry(model, key, frame, camera);
  FlowField flow = coarse_flow(k.eyes.mesh, f.eyes.mesh, key_image.width, key_image.height);
  RgbImage out = warp_frame(key_image, flow);
  if (flow_out) *flow_out = std::move(flow);
  return out;
}

}  // namespace ifvc
