#include "ifvc/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ifvc/errors.hpp"

namespace ifvc {

namespace {

constexpr std::array<std::string_view, kSemanticDim> kNames = {
    "mouth0", "mouth1", "mouth2", "mouth3", "mouth4", "mouth5", "eye",
    "rotx",   "roty",   "rotz",   "transx", "transy", "transz", "loc"};

std::string where(std::optional<std::size_t> frame) {
  return frame ? "frame " + std::to_string(*frame) + ": " : std::string{};
}

void check_finite(const std::vector<double>& values, const char* field) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError("key." + std::string(field) + "[" + std::to_string(i) + "] is not finite",
                            std::nullopt, field);
    }
  }
}

}  // namespace

SemanticArray flatten(const SemanticVector& v) {
  SemanticArray out{};
  std::copy(v.mouth.begin(), v.mouth.end(), out.begin() + slot::kMouth);
  out[slot::kEye] = v.eye;
  std::copy(v.rot.begin(), v.rot.end(), out.begin() + slot::kRot);
  std::copy(v.trans.begin(), v.trans.end(), out.begin() + slot::kTrans);
  out[slot::kLoc] = v.loc;
  return out;
}

SemanticVector unflatten(const SemanticArray& values) {
  SemanticVector v;
  std::copy_n(values.begin() + slot::kMouth, kMouthDim, v.mouth.begin());
  v.eye = values[slot::kEye];
  std::copy_n(values.begin() + slot::kRot, 3, v.rot.begin());
  std::copy_n(values.begin() + slot::kTrans, 3, v.trans.begin());
  v.loc = values[slot::kLoc];
  return v;
}

std::string_view component_name(std::size_t index) { return kNames.at(index); }

void validate(const SemanticVector& v, std::optional<std::size_t> frame) {
  const SemanticArray values = flatten(v);
  for (std::size_t i = 0; i < kSemanticDim; ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError(where(frame) + std::string(kNames[i]) + " is not finite", frame,
                            std::string(kNames[i]));
    }
  }
  if (v.eye < kEyeMin || v.eye > kEyeMax) {
    throw ValidationError(where(frame) + "eye = " + std::to_string(v.eye) + " outside [0, 5]", frame,
                          "eye");
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (std::abs(v.rot[i]) > std::numbers::pi) {
      const auto name = std::string(kNames[slot::kRot + i]);
      throw ValidationError(where(frame) + name + " = " + std::to_string(v.rot[i]) +
                                " outside [-pi, pi]",
                            frame, name);
    }
  }
}

double clamp_component(std::size_t index, double value) {
  if (index == slot::kEye) return std::clamp(value, kEyeMin, kEyeMax);
  if (index >= slot::kRot && index < slot::kRot + 3) {
    return std::clamp(value, -std::numbers::pi, std::numbers::pi);
  }
  return value;
}

void validate(const KeyFrameSemantics& key) {
  check_finite(key.id_coeffs, "id");
  check_finite(key.alb_coeffs, "alb");
  check_finite(key.illum_coeffs, "illum");
  check_finite(key.exp_coeffs, "exp");
  validate(key.pose);
}

void validate(const SemanticTrace& trace) {
  if (!(trace.fps > 0.0) || !std::isfinite(trace.fps)) {
    throw ValidationError("fps must be a positive finite number", std::nullopt, "fps");
  }
  if (trace.frames.empty()) throw ValidationError("trace has no frames", std::nullopt, "frames");
  validate(trace.key);
  for (std::size_t i = 0; i < trace.frames.size(); ++i) validate(trace.frames[i], i);
}

}  // namespace ifvc
