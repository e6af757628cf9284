#pragma once

#include <cmath>

#include "gazewalk/core.hpp"

namespace gazewalk {

/// One gaze relocation, kept redundantly in Cartesian and polar form.
struct GazeShift {
  double dx = 0.0;
  double dy = 0.0;
  double amplitude = 0.0;      // pixels, >= 0
  double direction = 0.0;      // radians in (-pi, pi]
  double duration_ms = 0.0;

  void validate() const {
    if (amplitude < 0.0) throw DataError("shift amplitude must be >= 0");
    if (direction <= -kPi || direction > kPi)
      throw DataError("shift direction must lie in (-pi, pi]");
    const double ex = amplitude * std::cos(direction);
    const double ey = amplitude * std::sin(direction);
    if (std::abs(ex - dx) > 1e-9 || std::abs(ey - dy) > 1e-9)
      throw DataError("(amplitude, direction) inconsistent with (dx, dy)");
  }
};

inline GazeShift make_shift(double dx, double dy, double duration_ms = 0.0) {
  GazeShift s;
  s.amplitude = std::hypot(dx, dy);
  s.direction = s.amplitude > 0.0 ? wrap_angle(std::atan2(dy, dx)) : 0.0;
  // Rebuild the Cartesian pair from polar so the pair is consistent to
  // round-off even for denormal inputs.
  s.dx = s.amplitude * std::cos(s.direction);
  s.dy = s.amplitude * std::sin(s.direction);
  s.duration_ms = duration_ms;
  return s;
}

inline GazeShift make_shift_polar(double amplitude, double direction,
                                  double duration_ms = 0.0) {
  GazeShift s;
  s.amplitude = amplitude;
  s.direction = wrap_angle(direction);
  s.dx = amplitude * std::cos(s.direction);
  s.dy = amplitude * std::sin(s.direction);
  s.duration_ms = duration_ms;
  return s;
}

}  // namespace gazewalk
