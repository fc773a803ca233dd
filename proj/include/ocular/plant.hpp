#pragma once

// Tendon-driven eyeball model: gaze <-> cord excursion <-> servo horn angle,
// plus a rate-limited first-order surrogate of the servo itself.
//
// Conventions: pan > 0 turns the eye to the robot's left, tilt > 0 turns it up.
// Gaze is in radians, cord excursion in millimetres, servo angles in degrees
// relative to the servo's neutral position.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace ocular {

/// (pan, tilt) in radians.
template <typename Scalar = double>
using GazeState = Eigen::Matrix<Scalar, 2, 1>;

/// (horizontal, vertical) cord excursion in mm; positive shortens the agonist side.
template <typename Scalar = double>
using TendonExcursion = Eigen::Matrix<Scalar, 2, 1>;

/// (horizontal servo, vertical servo) in degrees relative to neutral.
template <typename Scalar = double>
using ServoAngles = Eigen::Matrix<Scalar, 2, 1>;

inline constexpr int kPan = 0;
inline constexpr int kTilt = 1;

template <typename Scalar>
constexpr Scalar deg2rad(Scalar deg) {
  return deg * std::numbers::pi_v<Scalar> / Scalar(180);
}

template <typename Scalar>
constexpr Scalar rad2deg(Scalar rad) {
  return rad * Scalar(180) / std::numbers::pi_v<Scalar>;
}

template <typename Scalar = double>
struct EyeGeometry {
  Scalar eyeball_radius = Scalar(30.0);       // mm (60 mm eyeball)
  Scalar attachment_angle = Scalar(55.0);     // deg from the optical axis; not used by the mapping
  Scalar bobbin_radius = Scalar(8.0);         // mm
  Scalar gaze_limit_pan = Scalar(30.0);       // deg
  Scalar gaze_limit_tilt = Scalar(30.0);      // deg
  Scalar interocular_distance = Scalar(70.0); // mm

  void validate() const {
    if (!(eyeball_radius > 0 && bobbin_radius > 0 && interocular_distance > 0))
      throw std::invalid_argument("eye geometry: lengths must be positive");
    if (!(attachment_angle > 0 && attachment_angle < 90))
      throw std::invalid_argument("eye geometry: attachment_angle must lie in (0, 90) deg");
    if (!(gaze_limit_pan > 0 && gaze_limit_tilt > 0))
      throw std::invalid_argument("eye geometry: gaze limits must be positive");
    if (!(bobbin_radius < eyeball_radius))
      throw std::invalid_argument("eye geometry: bobbin_radius must be smaller than eyeball_radius");
  }

  /// Servo degrees per gaze degree.
  Scalar transmission_ratio() const { return eyeball_radius / bobbin_radius; }

  GazeState<Scalar> gaze_limits() const {
    return {deg2rad(gaze_limit_pan), deg2rad(gaze_limit_tilt)};
  }
};

class GazeRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

template <typename Scalar>
bool gaze_in_range(const EyeGeometry<Scalar>& geom, const GazeState<Scalar>& gaze) {
  return (gaze.cwiseAbs().array() <= geom.gaze_limits().array()).all();
}

template <typename Scalar>
std::pair<GazeState<Scalar>, bool> clamp_gaze(const EyeGeometry<Scalar>& geom,
                                              const GazeState<Scalar>& gaze) {
  const GazeState<Scalar> limit = geom.gaze_limits();
  const GazeState<Scalar> clamped = gaze.cwiseMax(-limit).cwiseMin(limit);
  return {clamped, (clamped.array() != gaze.array()).any()};
}

/// Constant moment arm: a cord wrapped on a great circle changes length by R * theta.
template <typename Scalar>
TendonExcursion<Scalar> tendon_excursion(const EyeGeometry<Scalar>& geom,
                                         const GazeState<Scalar>& gaze) {
  if (!gaze_in_range(geom, gaze)) throw GazeRangeError("gaze outside mechanical range");
  return geom.eyeball_radius * gaze;
}

/// Servo horn angle that winds up the excursion of tendon_excursion() on the
/// bobbin, i.e. gaze scaled by eyeball_radius / bobbin_radius.
template <typename Scalar>
ServoAngles<Scalar> gaze_to_servo(const EyeGeometry<Scalar>& geom, const GazeState<Scalar>& gaze) {
  if (!gaze_in_range(geom, gaze)) throw GazeRangeError("gaze outside mechanical range");
  return gaze.unaryExpr([](Scalar r) { return rad2deg(r); }) * geom.transmission_ratio();
}

/// Inverse transmission. Results beyond the gaze limits are clamped and flagged.
template <typename Scalar>
std::pair<GazeState<Scalar>, bool> servo_to_gaze(const EyeGeometry<Scalar>& geom,
                                                 const ServoAngles<Scalar>& servo) {
  const Scalar ratio = geom.transmission_ratio();
  const GazeState<Scalar> gaze = servo.unaryExpr([ratio](Scalar d) { return deg2rad(d / ratio); });
  return clamp_gaze(geom, gaze);
}

template <typename Scalar = double>
struct ServoModel {
  Scalar max_speed = Scalar(684.0);    // deg/s
  Scalar time_constant = Scalar(0.020); // s

  void validate() const {
    if (!(max_speed > 0)) throw std::invalid_argument("servo model: max_speed must be positive");
    if (!(time_constant > 0)) throw std::invalid_argument("servo model: time_constant must be positive");
  }
};

template <typename Scalar = double>
struct ServoState {
  Scalar position = Scalar(0); // deg
  Scalar goal = Scalar(0);     // deg
};

/// First-order lag toward the goal, then capped at max_speed * dt.
template <typename Scalar>
ServoState<Scalar> step_servo(const ServoModel<Scalar>& model, ServoState<Scalar> state, Scalar dt) {
  if (!(dt > 0)) throw std::invalid_argument("step_servo: dt must be positive");
  using std::exp;
  const Scalar cap = model.max_speed * dt;
  Scalar delta = (state.goal - state.position) * (Scalar(1) - exp(-dt / model.time_constant));
  delta = std::clamp(delta, -cap, cap);
  state.position += delta;
  return state;
}

}  // namespace ocular
