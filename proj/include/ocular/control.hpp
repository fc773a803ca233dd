#pragma once

// Image-space visual servo: per-axis PID on the normalised face error, a
// movement-mode supervisor and vestibulo-ocular feedforward. Outputs are gaze
// rates in rad/s; the caller integrates them into gaze goals.

#include "ocular/plant.hpp"
#include "ocular/vision.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>

namespace ocular {

template <typename Scalar = double>
struct PidGains {
  Scalar kp = Scalar(0);
  Scalar ki = Scalar(0);
  Scalar kd = Scalar(0);
  Scalar integral_limit = Scalar(1); // rad/s, bound on |ki * integral|
  Scalar output_limit = Scalar(1);   // rad/s

  void validate() const {
    if (!(kp >= 0 && ki >= 0 && kd >= 0)) throw std::invalid_argument("pid gains must be non-negative");
    if (!(integral_limit > 0 && output_limit > 0)) throw std::invalid_argument("pid limits must be positive");
  }
};

template <typename Scalar = double>
struct PidState {
  Scalar integral = Scalar(0);
  Scalar prev_error = Scalar(0);
  bool initialized = false;
};

/// Derivative on error, suppressed on the first sample. The integral is clamped
/// before use so its contribution never exceeds integral_limit.
template <typename Scalar>
std::pair<Scalar, PidState<Scalar>> pid_step(const PidGains<Scalar>& gains, PidState<Scalar> state,
                                             Scalar error, Scalar dt) {
  if (!(dt > 0)) throw std::invalid_argument("pid_step: dt must be positive");

  state.integral += error * dt;
  if (gains.ki > 0) {
    const Scalar bound = gains.integral_limit / gains.ki;
    state.integral = std::clamp(state.integral, -bound, bound);
  }
  const Scalar derivative = state.initialized ? (error - state.prev_error) / dt : Scalar(0);
  state.prev_error = error;
  state.initialized = true;

  const Scalar u = gains.kp * error + gains.ki * state.integral + gains.kd * derivative;
  return {std::clamp(u, -gains.output_limit, gains.output_limit), state};
}

enum class BaseMode { Saccade, SmoothPursuit, Fixation };

inline constexpr const char* mode_name(BaseMode mode) {
  switch (mode) {
    case BaseMode::Saccade: return "saccade";
    case BaseMode::SmoothPursuit: return "pursuit";
    case BaseMode::Fixation: return "fixation";
  }
  return "?";
}

struct MovementMode {
  BaseMode base = BaseMode::Fixation;
  bool vor_active = false;

  friend bool operator==(const MovementMode&, const MovementMode&) = default;
};

template <typename Scalar = double>
struct SupervisorConfig {
  Scalar saccade_threshold = Scalar(0.30);
  Scalar fixation_threshold = Scalar(0.03);
  Scalar vor_rate_threshold = Scalar(0.05); // rad/s
  Scalar vor_gain = Scalar(1.0);
  Scalar saccade_rate = Scalar(6.0);        // rad/s
  PidGains<Scalar> pursuit{Scalar(4.0), Scalar(2.0), Scalar(0.05), Scalar(1.0), Scalar(3.0)};
  PidGains<Scalar> saccade{Scalar(6.0), Scalar(0.0), Scalar(0.0), Scalar(1.0), Scalar(6.0)};

  void validate() const {
    if (!(fixation_threshold < saccade_threshold))
      throw std::invalid_argument("supervisor: fixation_threshold must be below saccade_threshold");
    if (!(fixation_threshold > 0)) throw std::invalid_argument("supervisor: thresholds must be positive");
    if (!(saccade_rate > 0 && vor_rate_threshold > 0))
      throw std::invalid_argument("supervisor: rates must be positive");
    if (!(vor_gain >= 0)) throw std::invalid_argument("supervisor: vor_gain must be non-negative");
    pursuit.validate();
    saccade.validate();
  }
};

/// Head angular rate (yaw_rate, pitch_rate), rad/s.
template <typename Scalar = double>
using HeadRate = Eigen::Matrix<Scalar, 2, 1>;

/// Gaze rate (pan_rate, tilt_rate), rad/s.
template <typename Scalar = double>
using GazeRate = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
bool vor_triggered(const HeadRate<std::type_identity_t<Scalar>>& head_rate, const SupervisorConfig<Scalar>& cfg) {
  return head_rate.template lpNorm<Eigen::Infinity>() > cfg.vor_rate_threshold;
}

template <typename Scalar>
MovementMode classify_mode(const Vector2<std::type_identity_t<Scalar>>& error,
                           const HeadRate<std::type_identity_t<Scalar>>& head_rate,
                           const SupervisorConfig<Scalar>& cfg) {
  const Scalar e = error.template lpNorm<Eigen::Infinity>();
  MovementMode mode;
  if (e > cfg.saccade_threshold)
    mode.base = BaseMode::Saccade;
  else if (e < cfg.fixation_threshold)
    mode.base = BaseMode::Fixation;
  else
    mode.base = BaseMode::SmoothPursuit;
  mode.vor_active = vor_triggered(head_rate, cfg);
  return mode;
}

/// Controller state for one eye. Saccade and pursuit/fixation keep separate PID
/// states; entering a gain set starts it from rest.
template <typename Scalar = double>
struct EyeControlState {
  std::array<PidState<Scalar>, 2> pursuit{};
  std::array<PidState<Scalar>, 2> saccade{};
  MovementMode mode{};
};

template <typename Scalar = double>
struct GazeCommand {
  GazeRate<Scalar> rate = GazeRate<Scalar>::Zero();
  EyeControlState<Scalar> state;
};

/// One control tick for one eye. A missing error (lost face) zeroes the visual
/// term and freezes the PID state; the VOR term is applied regardless.
/// A positive image error (face right of / below centre) drives a negative
/// gaze rate.
template <typename Scalar>
GazeCommand<Scalar> gaze_command(const SupervisorConfig<Scalar>& cfg, EyeControlState<Scalar> state,
                                 const std::optional<Vector2<std::type_identity_t<Scalar>>>& error,
                                 const HeadRate<std::type_identity_t<Scalar>>& head_rate,
                                 std::type_identity_t<Scalar> dt, bool vor_enabled = true) {
  if (!(dt > 0)) throw std::invalid_argument("gaze_command: dt must be positive");

  GazeCommand<Scalar> out;
  MovementMode mode = state.mode;
  mode.vor_active = vor_triggered(head_rate, cfg);

  if (error) {
    mode = classify_mode(*error, head_rate, cfg);
    const bool was_saccade = state.mode.base == BaseMode::Saccade;
    const bool is_saccade = mode.base == BaseMode::Saccade;
    if (is_saccade && !was_saccade) state.saccade = {};
    if (!is_saccade && was_saccade) state.pursuit = {};

    auto& pids = is_saccade ? state.saccade : state.pursuit;
    const PidGains<Scalar>& gains = is_saccade ? cfg.saccade : cfg.pursuit;
    const Scalar cap = is_saccade ? std::min(gains.output_limit, cfg.saccade_rate) : gains.output_limit;
    for (int axis = 0; axis < 2; ++axis) {
      auto [u, next] = pid_step(gains, pids[axis], (*error)[axis], dt);
      pids[axis] = next;
      out.rate[axis] = Scalar(0) - std::clamp(u, -cap, cap);
    }
  }

  if (mode.vor_active && vor_enabled) out.rate -= cfg.vor_gain * head_rate;

  state.mode = mode;
  out.state = state;
  return out;
}

/// Inward pan of each eye that fixates a midline target at `distance` metres.
/// Returns (left, right); the left eye pans right (negative), the right eye left.
template <typename Scalar>
std::pair<Scalar, Scalar> vergence_reference(const EyeGeometry<Scalar>& geom, Scalar distance) {
  if (!(distance > 0)) throw std::invalid_argument("vergence_reference: distance must be positive");
  using std::atan;
  const Scalar angle = atan((geom.interocular_distance / Scalar(2000)) / distance);
  return {-angle, angle};
}

}  // namespace ocular
