#pragma once

#include "ocular/plant.hpp"
#include "ocular/vision.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>

namespace ocular::sim {

/// A scripted experiment. Trajectories are evaluated on [0, duration]; times
/// outside that interval are clamped to it.
struct Scenario {
  std::string name;
  double duration = 1.0; // s
  std::function<Vector3<double>(double)> target;  // face centre, world frame, m
  std::function<HeadPose<double>(double)> head;   // rad
  std::array<GazeState<double>, 2> initial_gaze = {GazeState<double>::Zero(), GazeState<double>::Zero()};
  double noise_std = 0.0; // px
  std::uint64_t seed = 1;
  bool vor_disabled = false;

  void validate() const;

  Vector3<double> target_at(double t) const;
  HeadPose<double> head_at(double t) const;
  /// Central difference of the head trajectory over one control step.
  Eigen::Vector2d head_rate_at(double t, double dt) const;
};

struct SaccadeParams {
  double offset_frac = 0.9;
  double distance = 1.5; // m
  double duration = 5.0;
};

struct PursuitParams {
  double frequency = 0.2; // Hz
  double amplitude = 15.0; // deg
  double distance = 1.5;
  double duration = 15.0;
};

struct VergenceParams {
  double z_start = 2.0; // m
  double z_end = 0.3;
  double duration = 10.0;
};

struct VorParams {
  double frequency = 0.5;
  double amplitude = 10.0; // deg
  double distance = 1.5;
  double duration = 10.0;
};

/// Static face whose initial projection sits offset_frac of the half-width
/// right of centre, measured from the head centre.
Scenario scenario_saccade(const SaccadeParams& p = {}, const CameraModel<double>& camera = {});

/// Face moving on a sphere of radius `distance`; azimuth and elevation are the
/// same in-phase sinusoid. Throws if the amplitude exceeds the gaze limits.
Scenario scenario_pursuit(const PursuitParams& p = {}, const EyeGeometry<double>& geom = {});

/// Midline face approaching linearly. Eyes start verged on z_start.
Scenario scenario_vergence(const VergenceParams& p = {}, const EyeGeometry<double>& geom = {});

/// Static face, head yaw oscillating.
Scenario scenario_vor(const VorParams& p = {});

/// Face straight ahead at optical infinity: both eyes see it exactly at the image centre.
Scenario scenario_centered(double duration = 5.0);

/// Static face at `position`, for interactive sessions.
Scenario scenario_static(const Vector3<double>& position, double duration);

}  // namespace ocular::sim
