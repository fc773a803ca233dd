#pragma once

#include "ocular/protocol/sim_bus.hpp"
#include "ocular/rng.hpp"
#include "ocular/sim/config.hpp"
#include "ocular/sim/scenario.hpp"
#include "ocular/sim/trace.hpp"

#include <array>
#include <memory>
#include <optional>

namespace ocular::sim {

/// Fixed-step closed loop: camera -> controller -> servo bus -> plant.
/// Servo commands travel as encoded protocol frames through a SimBus.
class Engine {
 public:
  Engine(Scenario scenario, SimConfig cfg, std::shared_ptr<FaceSource> source = nullptr);

  /// Advances one control tick and returns its records (left, right).
  std::array<TraceRecord, 2> step();

  /// True once the scenario duration has been covered.
  bool done() const;
  std::size_t ticks() const { return tick_; }
  double time() const { return static_cast<double>(tick_) / cfg_.control_rate; }

  void set_target(const Vector3<double>& position) { target_override_ = position; }
  void set_head(const HeadPose<double>& head) { head_override_ = head; }
  void set_control(const SupervisorConfig<double>& control);
  void set_vor_enabled(bool enabled) { vor_enabled_ = enabled; }
  /// Back to the initial state; overrides are dropped.
  void reset();

  const SimConfig& config() const { return cfg_; }
  const Scenario& scenario() const { return scenario_; }
  bool vor_enabled() const { return vor_enabled_; }
  /// Target and head pose applied at the last tick.
  const Vector3<double>& target() const { return last_target_; }
  const HeadPose<double>& head() const { return last_head_; }
  const std::array<TraceRecord, 2>& last() const { return last_; }
  const protocol::SimBus& bus() const { return *bus_; }

 private:
  void init();
  HeadPose<double> head_at(double t) const;
  Vector3<double> target_at(double t) const;
  GazeState<double> servo_gaze(Eye eye) const;

  Scenario scenario_;
  SimConfig cfg_;
  std::shared_ptr<FaceSource> source_;
  double neutral_deg_ = 0.0;

  std::unique_ptr<protocol::SimBus> bus_;
  SplitMix64 rng_{1};
  std::size_t tick_ = 0;
  long long frame_ = -1;
  std::array<FaceObservation<double>, 2> held_{};
  std::array<EyeControlState<double>, 2> control_{};
  std::array<GazeState<double>, 2> goal_{};
  bool vor_enabled_ = true;
  std::optional<Vector3<double>> target_override_;
  std::optional<HeadPose<double>> head_override_;
  SupervisorConfig<double> initial_control_;
  HeadPose<double> prev_head_;
  Vector3<double> last_target_ = Vector3<double>::Zero();
  HeadPose<double> last_head_;
  std::array<TraceRecord, 2> last_{};
};

/// Runs the scenario to completion.
Trace run(const Scenario& scenario, const SimConfig& cfg);

}  // namespace ocular::sim
