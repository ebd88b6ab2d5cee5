#pragma once

#include <array>
#include <optional>

#include "ifvc/container.hpp"
#include "ifvc/eye_recalibration.hpp"
#include "ifvc/face_geometry.hpp"
#include "ifvc/flow.hpp"
#include "ifvc/image.hpp"
#include "ifvc/morphable_model.hpp"

namespace ifvc {

inline constexpr std::array<std::uint8_t, 3> kEdgeColour = {0, 255, 0};
inline constexpr std::array<std::uint8_t, 3> kEyeColour = {255, 0, 0};

/// Bresenham line between the rounded endpoints; pixels outside the image
/// are skipped. Endpoints far outside the image are first clipped to a
/// margin around it.
void draw_line(RgbImage& image, const Eigen::Vector2d& a, const Eigen::Vector2d& b, std::array<std::uint8_t, 3> rgb);

/// Black canvas; green edges of every triangle edge whose endpoints are both
/// visible; eye map pixels and eye polygon outlines in red on top.
RgbImage render_wireframe(const Mesh& mesh, const std::vector<std::array<int, 3>>& triangles,
                          const EyeRecalibration* eyes, int width, int height);

/// Projected mesh of one frame after eye recalibration.
struct FrameGeometry {
  Mesh mesh;
  EyeRecalibration eyes;
};

/// Key geometry uses the key's own expression vector and pose; inter
/// geometry uses the frame's mouth (zero padded) and pose. Identity always
/// comes from `key`.
FrameGeometry key_geometry(const MorphableModel& model, const KeyFrameSemantics& key, const CameraIntrinsics& camera);
FrameGeometry inter_geometry(const MorphableModel& model, const KeyFrameSemantics& key, const SemanticVector& frame,
                             const CameraIntrinsics& camera);

/// Key reference image for previews: the embedded PNG when the payload holds
/// one of the stream's size, else the key geometry drawn as a wireframe.
RgbImage key_reference_image(const KeyPayload& payload, const MorphableModel& model, const KeyFrameSemantics& key,
                             int width, int height);

/// Backward-warps `key_image` with the coarse flow between key and frame.
RgbImage render_preview(const MorphableModel& model, const KeyFrameSemantics& key, const RgbImage& key_image,
                        const SemanticVector& frame, FlowField* flow_out = nullptr);

}  // namespace ifvc
