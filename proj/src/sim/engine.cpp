#include "ocular/sim/engine.hpp"

#include "ocular/protocol/driver.hpp"
#include "ocular/protocol/units.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ocular::sim {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint16_t read_units(protocol::SimBus& bus, std::uint8_t id) {
  const auto reply = protocol::read_register(bus, id, protocol::xl320::kPresentPosition);
  if (!reply.ok()) throw std::runtime_error("sim bus: no position reply from servo " + std::to_string(id));
  return reply.value;
}

}  // namespace

double TraceRecord::error_inf() const {
  if (!valid) return std::numeric_limits<double>::infinity();
  return std::max(std::abs(ex), std::abs(ey));
}

Engine::Engine(Scenario scenario, SimConfig cfg, std::shared_ptr<FaceSource> source)
    : scenario_(std::move(scenario)), cfg_(std::move(cfg)), source_(std::move(source)) {
  cfg_.validate();
  scenario_.validate();
  initial_control_ = cfg_.control;
  init();
}

void Engine::init() {
  neutral_deg_ = protocol::units_to_deg(cfg_.neutral_units);
  rng_ = SplitMix64(scenario_.seed);
  tick_ = 0;
  frame_ = -1;
  held_ = {};
  control_ = {};
  last_ = {};

  std::vector<protocol::SimServo> servos;
  for (Eye eye : kEyes) {
    const auto i = static_cast<std::size_t>(eye);
    goal_[i] = clamp_gaze(cfg_.geometry, scenario_.initial_gaze[i]).first;
    const ServoAngles<double> servo = gaze_to_servo(cfg_.geometry, goal_[i]);
    servos.emplace_back(cfg_.servo_ids.horizontal(eye), cfg_.servo,
                        protocol::deg_to_units(neutral_deg_ + servo[kPan]));
    servos.emplace_back(cfg_.servo_ids.vertical(eye), cfg_.servo,
                        protocol::deg_to_units(neutral_deg_ + servo[kTilt]));
  }
  bus_ = std::make_unique<protocol::SimBus>(std::move(servos), cfg_.bus_latency);
  for (auto id : cfg_.servo_ids.all()) {
    const auto status = protocol::write_register(*bus_, id, protocol::xl320::kTorqueEnable, 1);
    if (!status.ok()) throw std::runtime_error("sim bus: torque enable failed on servo " + std::to_string(id));
  }

  prev_head_ = head_at(0.0);
  last_head_ = prev_head_;
  last_target_ = target_at(0.0);
}

void Engine::set_control(const SupervisorConfig<double>& control) {
  control.validate();
  cfg_.control = control;
}

void Engine::reset() {
  target_override_.reset();
  head_override_.reset();
  vor_enabled_ = true;
  cfg_.control = initial_control_;
  init();
}

bool Engine::done() const {
  if (!std::isfinite(scenario_.duration)) return false;
  const auto total = static_cast<std::size_t>(std::floor(scenario_.duration * cfg_.control_rate + 1e-9)) + 1;
  return tick_ >= total;
}

HeadPose<double> Engine::head_at(double t) const { return head_override_ ? *head_override_ : scenario_.head_at(t); }

Vector3<double> Engine::target_at(double t) const {
  return target_override_ ? *target_override_ : scenario_.target_at(t);
}

GazeState<double> Engine::servo_gaze(Eye eye) const {
  double h = 0.0, v = 0.0;
  for (const auto& s : bus_->servos()) {
    if (s.id() == cfg_.servo_ids.horizontal(eye)) h = s.position_deg();
    if (s.id() == cfg_.servo_ids.vertical(eye)) v = s.position_deg();
  }
  return servo_to_gaze(cfg_.geometry, ServoAngles<double>(h - neutral_deg_, v - neutral_deg_)).first;
}

std::array<TraceRecord, 2> Engine::step() {
  const double dt = cfg_.dt();
  const double t = time();
  bus_->advance_to(t);

  const HeadPose<double> head = head_at(t);
  HeadRate<double> head_rate;
  if (head_override_)
    head_rate << (head.yaw - prev_head_.yaw) / dt, (head.pitch - prev_head_.pitch) / dt;
  else
    head_rate = scenario_.head_rate_at(t, dt);
  prev_head_ = head;
  const Vector3<double> target = target_at(t);

  const auto frame = static_cast<long long>(std::floor(t * cfg_.camera_rate + 1e-9));
  if (frame != frame_) {
    frame_ = frame;
    const FaceTarget<double> face{target, cfg_.face_width};
    for (Eye eye : kEyes) {
      const auto i = static_cast<std::size_t>(eye);
      held_[i] = source_ ? source_->next_observation(eye, t)
                         : observe_face_one(face, head, cfg_.geometry, eye, servo_gaze(eye), cfg_.camera,
                                            scenario_.noise_std, rng_, t);
    }
  }

  const bool vor = vor_enabled_ && !scenario_.vor_disabled;
  std::array<GazeRate<double>, 2> rates;
  std::array<std::pair<std::uint8_t, std::uint16_t>, 4> goals;
  for (Eye eye : kEyes) {
    const auto i = static_cast<std::size_t>(eye);
    const auto cmd = gaze_command(cfg_.control, control_[i], normalized_error(held_[i], cfg_.camera), head_rate, dt, vor);
    control_[i] = cmd.state;
    rates[i] = cmd.rate;
    goal_[i] = clamp_gaze(cfg_.geometry, GazeState<double>(goal_[i] + cmd.rate * dt)).first;
    const ServoAngles<double> servo = gaze_to_servo(cfg_.geometry, goal_[i]);
    goals[2 * i] = {cfg_.servo_ids.horizontal(eye), protocol::deg_to_units(neutral_deg_ + servo[kPan])};
    goals[2 * i + 1] = {cfg_.servo_ids.vertical(eye), protocol::deg_to_units(neutral_deg_ + servo[kTilt])};
  }
  protocol::sync_write_goal_units(*bus_, goals);
  bus_->step_servos(dt);

  std::array<TraceRecord, 2> out;
  for (Eye eye : kEyes) {
    const auto i = static_cast<std::size_t>(eye);
    const std::uint16_t h = read_units(*bus_, cfg_.servo_ids.horizontal(eye));
    const std::uint16_t v = read_units(*bus_, cfg_.servo_ids.vertical(eye));
    const GazeState<double> gaze =
        servo_to_gaze(cfg_.geometry, ServoAngles<double>(protocol::units_to_deg(h) - neutral_deg_,
                                                         protocol::units_to_deg(v) - neutral_deg_))
            .first;

    TraceRecord& r = out[i];
    r.t = t;
    r.eye = eye;
    const auto& obs = held_[i];
    r.valid = obs.valid;
    if (const auto e = normalized_error(obs, cfg_.camera)) {
      r.u = obs.center.x();
      r.v = obs.center.y();
      r.ex = e->x();
      r.ey = e->y();
    } else {
      r.u = r.v = r.ex = r.ey = kNaN;
    }
    r.pan_deg = rad2deg(gaze[kPan]);
    r.tilt_deg = rad2deg(gaze[kTilt]);
    r.servo_h_units = h;
    r.servo_v_units = v;
    r.mode = control_[i].mode.base;
    r.vor_active = control_[i].mode.vor_active && vor;
    r.head_yaw = rad2deg(head.yaw);
    r.head_pitch = rad2deg(head.pitch);
    r.rate_pan = rates[i][kPan];
    r.rate_tilt = rates[i][kTilt];
  }

  last_ = out;
  last_head_ = head;
  last_target_ = target;
  ++tick_;
  return out;
}

Trace run(const Scenario& scenario, const SimConfig& cfg) {
  Engine engine(scenario, cfg);
  Trace trace;
  while (!engine.done()) {
    const auto records = engine.step();
    trace.insert(trace.end(), records.begin(), records.end());
  }
  return trace;
}

}  // namespace ocular::sim
