#pragma once

#include <cstddef>

#include "ifvc/semantics.hpp"

namespace ifvc {

/// Smooth talking-head trace: sinusoidal yaw of +-yaw_amplitude (4 s
/// period), gentle pitch/roll sway, mouth motion, and a 0.2 s blink every
/// 2 s. The key pose equals frame 0.
SemanticTrace make_demo_trace(std::size_t frames, double fps = 25.0, double yaw_amplitude = 0.3);

}  // namespace ifvc
