#pragma once

#include "ocular/plant.hpp"
#include "ocular/protocol/bus.hpp"
#include "ocular/protocol/control_table.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <span>
#include <utility>
#include <vector>

namespace ocular::protocol {

/// An XL-320 stand-in: a register file backed by the first-order servo model.
/// Positions are absolute degrees on the 0..300 scale.
class SimServo {
 public:
  SimServo(std::uint8_t id, ServoModel<double> model, std::uint16_t initial_units = 512, bool instant = false);

  std::uint8_t id() const { return id_; }

  /// Returns the status error byte; state is untouched unless it is kNone.
  std::uint8_t write(std::uint16_t address, std::span<const std::uint8_t> data);
  std::pair<std::uint8_t, Bytes> read(std::uint16_t address, std::uint16_t length) const;

  void step(double dt);

  double position_deg() const { return state_.position; }
  double goal_deg() const { return state_.goal; }
  std::uint16_t register_value(const Register& reg) const;
  bool torque_enabled() const { return registers_[xl320::kTorqueEnable.address] != 0; }
  std::size_t register_file_size() const { return registers_.size(); }

 private:
  void set_register(const Register& reg, std::uint16_t value);
  void sync_present_position();

  std::uint8_t id_;
  ServoModel<double> model_;
  ServoState<double> state_;
  bool instant_;
  std::array<std::uint8_t, xl320::kTableSize> registers_{};
};

struct BusDiagnostics {
  std::size_t dropped_frames = 0;
  std::size_t handled_frames = 0;
};

/// Handles one frame addressed to `servos` and returns the response bytes
/// (possibly several concatenated status frames, possibly none).
Bytes sim_bus_dispatch(std::span<SimServo> servos, std::span<const std::uint8_t> frame, BusDiagnostics& diag);

/// In-process bus with zero-latency (or fixed-latency) status delivery.
class SimBus : public BusTransport {
 public:
  explicit SimBus(std::vector<SimServo> servos, double latency = 0.0);

  void send(std::span<const std::uint8_t> bytes) override;
  Bytes receive(double deadline) override;
  double now() const override { return clock_; }

  void advance_to(double t) { clock_ = t; }
  void step_servos(double dt);

  std::span<SimServo> servos() { return servos_; }
  std::span<const SimServo> servos() const { return servos_; }
  SimServo* find(std::uint8_t id);
  const BusDiagnostics& diagnostics() const { return diag_; }

 private:
  std::vector<SimServo> servos_;
  double latency_;
  double clock_ = 0.0;
  FrameDecoder rx_;
  std::deque<std::pair<double, Bytes>> outbox_;
  BusDiagnostics diag_;
};

}  // namespace ocular::protocol
