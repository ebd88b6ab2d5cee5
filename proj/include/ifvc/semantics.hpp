#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace ifvc {

inline constexpr std::size_t kSemanticDim = 14;
inline constexpr std::size_t kMouthDim = 6;
inline constexpr double kEyeMin = 0.0;
inline constexpr double kEyeMax = 5.0;

using SemanticArray = std::array<double, kSemanticDim>;

// Flattened slot positions (canonical wire order).
namespace slot {
inline constexpr std::size_t kMouth = 0;
inline constexpr std::size_t kEye = 6;
inline constexpr std::size_t kRot = 7;
inline constexpr std::size_t kTrans = 10;
inline constexpr std::size_t kLoc = 13;
}  // namespace slot

/// Per-frame transmitted facial semantics: mouth expression coefficients,
/// blink intensity, head rotation (Euler, radians), translation and the
/// head-location depth offset.
struct SemanticVector {
  std::array<double, kMouthDim> mouth{};
  double eye = 0.0;
  std::array<double, 3> rot{};
  std::array<double, 3> trans{};
  double loc = 0.0;

  friend bool operator==(const SemanticVector&, const SemanticVector&) = default;
};

/// Order: mouth[0..6], eye, rot[0..3], trans[0..3], loc.
SemanticArray flatten(const SemanticVector& v);
SemanticVector unflatten(const SemanticArray& values);

/// CSV column name of a flattened slot ("mouth0", "eye", "rotx", ...).
std::string_view component_name(std::size_t index);

/// Throws ValidationError naming the field (and frame, when given).
void validate(const SemanticVector& v, std::optional<std::size_t> frame = std::nullopt);

/// Projects a single flattened component back into its legal domain: eye is
/// clamped to [0, 5], rotations to [-pi, pi]. Other slots pass through.
double clamp_component(std::size_t index, double value);

/// Session-wide coefficients taken from the key-reference frame. Empty
/// coefficient vectors stand for all-zero vectors of the model's rank.
struct KeyFrameSemantics {
  std::vector<double> id_coeffs;
  std::vector<double> alb_coeffs;
  std::vector<double> illum_coeffs;
  std::vector<double> exp_coeffs;
  SemanticVector pose;

  friend bool operator==(const KeyFrameSemantics&, const KeyFrameSemantics&) = default;
};

void validate(const KeyFrameSemantics& key);

struct SemanticTrace {
  double fps = 25.0;
  std::vector<SemanticVector> frames;
  KeyFrameSemantics key;

  friend bool operator==(const SemanticTrace&, const SemanticTrace&) = default;
};

void validate(const SemanticTrace& trace);

}  // namespace ifvc
