#pragma once

#include "ocular/control.hpp"
#include "ocular/vision.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace ocular::sim {

/// One eye at one control tick. Image quantities are NaN when the face is not seen.
struct TraceRecord {
  double t = 0.0;
  Eye eye = Eye::Left;
  double u = std::numeric_limits<double>::quiet_NaN();
  double v = std::numeric_limits<double>::quiet_NaN();
  bool valid = false;
  double ex = std::numeric_limits<double>::quiet_NaN();
  double ey = std::numeric_limits<double>::quiet_NaN();
  double pan_deg = 0.0;
  double tilt_deg = 0.0;
  std::uint16_t servo_h_units = 0;
  std::uint16_t servo_v_units = 0;
  BaseMode mode = BaseMode::Fixation;
  bool vor_active = false;
  double head_yaw = 0.0;   // deg
  double head_pitch = 0.0; // deg
  double rate_pan = 0.0;   // commanded, rad/s
  double rate_tilt = 0.0;

  double error_inf() const;
};

/// Records in tick order, left eye before right within a tick.
using Trace = std::vector<TraceRecord>;

}  // namespace ocular::sim
