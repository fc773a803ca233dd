#include "ocular/sim/scenario.hpp"

#include "ocular/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ocular::sim {

void Scenario::validate() const {
  if (!(duration > 0)) throw std::invalid_argument("scenario: duration must be positive");
  if (!target || !head) throw std::invalid_argument("scenario: trajectories must be set");
  if (!(noise_std >= 0)) throw std::invalid_argument("scenario: noise_std must be non-negative");
}

Vector3<double> Scenario::target_at(double t) const { return target(std::clamp(t, 0.0, duration)); }

HeadPose<double> Scenario::head_at(double t) const { return head(std::clamp(t, 0.0, duration)); }

Eigen::Vector2d Scenario::head_rate_at(double t, double dt) const {
  const double t0 = std::clamp(t - dt / 2, 0.0, duration);
  const double t1 = std::clamp(t + dt / 2, 0.0, duration);
  if (!(t1 > t0)) return Eigen::Vector2d::Zero();
  const HeadPose<double> a = head(t0);
  const HeadPose<double> b = head(t1);
  return {(b.yaw - a.yaw) / (t1 - t0), (b.pitch - a.pitch) / (t1 - t0)};
}

namespace {

std::function<HeadPose<double>(double)> still_head() {
  return [](double) { return HeadPose<double>{}; };
}

}  // namespace

Scenario scenario_saccade(const SaccadeParams& p, const CameraModel<double>& camera) {
  if (!(p.offset_frac > 0 && p.offset_frac <= 1)) throw std::invalid_argument("saccade: offset_frac must lie in (0, 1]");
  if (!(p.distance > 0)) throw std::invalid_argument("saccade: distance must be positive");
  camera.validate();
  const Vector3<double> face(p.distance * p.offset_frac * (camera.width / 2) / camera.focal(), 0.0, p.distance);

  Scenario s;
  s.name = "saccade";
  s.duration = p.duration;
  s.target = [face](double) { return face; };
  s.head = still_head();
  s.validate();
  return s;
}

Scenario scenario_pursuit(const PursuitParams& p, const EyeGeometry<double>& geom) {
  if (!(p.frequency > 0)) throw std::invalid_argument("pursuit: frequency must be positive");
  if (!(p.amplitude >= 0)) throw std::invalid_argument("pursuit: amplitude must be non-negative");
  if (p.amplitude > std::min(geom.gaze_limit_pan, geom.gaze_limit_tilt))
    throw std::invalid_argument("pursuit: amplitude exceeds the gaze limits");
  if (!(p.distance > 0)) throw std::invalid_argument("pursuit: distance must be positive");

  const double w = 2 * std::numbers::pi * p.frequency;
  const double amp = deg2rad(p.amplitude);
  const double r = p.distance;
  Scenario s;
  s.name = "pursuit";
  s.duration = p.duration;
  s.target = [=](double t) {
    const double angle = amp * std::sin(w * t);
    // Azimuth positive to the robot's left, i.e. towards -x.
    return Vector3<double>(-r * std::cos(angle) * std::sin(angle), r * std::sin(angle),
                           r * std::cos(angle) * std::cos(angle));
  };
  s.head = still_head();
  s.validate();
  return s;
}

Scenario scenario_vergence(const VergenceParams& p, const EyeGeometry<double>& geom) {
  if (!(p.z_start > 0)) throw std::invalid_argument("vergence: z_start must be positive");
  if (!(p.z_end > 0)) throw std::invalid_argument("vergence: z_end must be positive");

  Scenario s;
  s.name = "vergence";
  s.duration = p.duration;
  const double z0 = p.z_start, z1 = p.z_end, T = p.duration;
  s.target = [=](double t) { return Vector3<double>(0.0, 0.0, z0 + (z1 - z0) * t / T); };
  s.head = still_head();
  const auto [left, right] = vergence_reference(geom, z0);
  s.initial_gaze = {GazeState<double>(left, 0.0), GazeState<double>(right, 0.0)};
  s.validate();
  return s;
}

Scenario scenario_vor(const VorParams& p) {
  if (!(p.frequency > 0)) throw std::invalid_argument("vor: frequency must be positive");
  if (!(p.distance > 0)) throw std::invalid_argument("vor: distance must be positive");

  const double w = 2 * std::numbers::pi * p.frequency;
  const double amp = deg2rad(p.amplitude);
  const Vector3<double> face(0.0, 0.0, p.distance);
  Scenario s;
  s.name = "vor";
  s.duration = p.duration;
  s.target = [face](double) { return face; };
  s.head = [=](double t) { return HeadPose<double>{amp * std::sin(w * t), 0.0}; };
  s.validate();
  return s;
}

Scenario scenario_centered(double duration) {
  // Far enough that the half-baseline parallax is below one ulp of the image centre.
  Scenario s = scenario_static(Vector3<double>(0.0, 0.0, 1e16), duration);
  s.name = "centered";
  return s;
}

Scenario scenario_static(const Vector3<double>& position, double duration) {
  Scenario s;
  s.name = "static";
  s.duration = duration;
  s.target = [position](double) { return position; };
  s.head = still_head();
  s.validate();
  return s;
}

}  // namespace ocular::sim
