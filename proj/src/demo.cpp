#include "ifvc/demo.hpp"

#include <cmath>
#include <numbers>

namespace ifvc {

SemanticTrace make_demo_trace(std::size_t frames, double fps, double yaw_amplitude) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  SemanticTrace trace;
  trace.fps = fps;
  for (std::size_t f = 0; f < frames; ++f) {
    const double t = static_cast<double>(f) / fps;
    SemanticVector v;
    v.rot = {0.05 * std::sin(two_pi * t / 3.0), yaw_amplitude * std::sin(two_pi * t / 4.0),
             0.03 * std::sin(two_pi * t / 5.0)};
    v.trans = {0.1 * std::sin(two_pi * t / 6.0), 0.05 * std::sin(two_pi * t / 3.5), 0.0};
    v.loc = 0.1 * std::sin(two_pi * t / 8.0);
    v.mouth = {0.6 * (1.0 + std::sin(two_pi * t * 1.3)) * 0.5, 0.3 * std::sin(two_pi * t / 2.5),
               0.2 * std::sin(two_pi * t / 1.7), 0.15 * std::sin(two_pi * t * 0.9),
               0.15 * std::sin(two_pi * t * 1.1), 0.05 * std::sin(two_pi * t / 3.0)};
    // Blink: triangular closure over 0.2 s at the start of every 2 s window.
    const double phase = std::fmod(t, 2.0);
    v.eye = phase < 0.2 ? 5.0 * (1.0 - std::abs(phase - 0.1) / 0.1) : 0.0;
    trace.frames.push_back(v);
  }
  if (!trace.frames.empty()) trace.key.pose = trace.frames.front();
  return trace;
}

}  // namespace ifvc
