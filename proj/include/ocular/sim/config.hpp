#pragma once

#include "ocular/control.hpp"
#include "ocular/plant.hpp"
#include "ocular/vision.hpp"

#include <array>
#include <cstdint>

namespace ocular::sim {

/// Servo bus addresses, one per actuator.
struct ServoIds {
  std::uint8_t left_h = 1;
  std::uint8_t left_v = 2;
  std::uint8_t right_h = 3;
  std::uint8_t right_v = 4;

  std::array<std::uint8_t, 4> all() const { return {left_h, left_v, right_h, right_v}; }
  std::uint8_t horizontal(Eye eye) const { return eye == Eye::Left ? left_h : right_h; }
  std::uint8_t vertical(Eye eye) const { return eye == Eye::Left ? left_v : right_v; }
};

struct SimConfig {
  double control_rate = 100.0; // Hz
  double camera_rate = 30.0;   // Hz
  EyeGeometry<double> geometry;
  ServoModel<double> servo;
  CameraModel<double> camera;
  SupervisorConfig<double> control;
  double face_width = 0.16; // m
  double bus_latency = 0.0; // s
  ServoIds servo_ids;
  std::uint16_t neutral_units = 512; // servo position at zero gaze

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;

  double dt() const { return 1.0 / control_rate; }
};

}  // namespace ocular::sim
