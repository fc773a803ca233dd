#include "ocular/protocol/sim_bus.hpp"

#include "ocular/protocol/units.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ocular::protocol {
namespace {

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

Bytes status(std::uint8_t id, std::uint8_t error, Bytes params = {}) {
  return encode_status(StatusPacket{id, error, std::move(params)});
}

void append(Bytes& out, const Bytes& frame) { out.insert(out.end(), frame.begin(), frame.end()); }

std::vector<SimServo*> in_id_order(std::span<SimServo> servos) {
  std::vector<SimServo*> order;
  order.reserve(servos.size());
  for (auto& s : servos) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](const SimServo* a, const SimServo* b) { return a->id() < b->id(); });
  return order;
}

Bytes handle(std::span<SimServo> servos, const InstructionPacket& packet) {
  const bool broadcast = packet.id == kBroadcastId;
  const auto params = std::span<const std::uint8_t>(packet.params);
  Bytes out;

  switch (static_cast<Instruction>(packet.instruction)) {
    case Instruction::Ping:
      for (SimServo* s : in_id_order(servos)) {
        if (!broadcast && s->id() != packet.id) continue;
        const std::uint16_t model = s->register_value(xl320::kModelNumber);
        append(out, status(s->id(), status_error::kNone,
                           {static_cast<std::uint8_t>(model & 0xFF), static_cast<std::uint8_t>(model >> 8),
                            static_cast<std::uint8_t>(s->register_value(xl320::kFirmwareVersion))}));
      }
      return out;

    case Instruction::Read:
      if (broadcast) return out;
      for (SimServo* s : in_id_order(servos)) {
        if (s->id() != packet.id) continue;
        if (params.size() != 4) {
          append(out, status(s->id(), status_error::kDataLength));
        } else {
          auto [err, data] = s->read(get_u16(params, 0), get_u16(params, 2));
          append(out, status(s->id(), err, std::move(data)));
        }
      }
      return out;

    case Instruction::Write:
      for (SimServo* s : in_id_order(servos)) {
        if (!broadcast && s->id() != packet.id) continue;
        const std::uint8_t err = params.size() < 3 ? status_error::kDataLength
                                                   : s->write(get_u16(params, 0), params.subspan(2));
        if (!broadcast) append(out, status(s->id(), err));
      }
      return out;

    case Instruction::SyncWrite: {
      if (!broadcast || params.size() < 4) return out;
      const std::uint16_t address = get_u16(params, 0);
      const std::uint16_t length = get_u16(params, 2);
      const std::size_t stride = std::size_t{1} + length;
      if (length == 0 || (params.size() - 4) % stride != 0) return out;
      for (std::size_t at = 4; at < params.size(); at += stride) {
        const std::uint8_t id = params[at];
        for (SimServo* s : in_id_order(servos))
          if (s->id() == id) s->write(address, params.subspan(at + 1, length));
      }
      return out;
    }

    case Instruction::Status:
      return out;
  }

  if (!broadcast)
    for (SimServo* s : in_id_order(servos))
      if (s->id() == packet.id) append(out, status(s->id(), status_error::kInstruction));
  return out;
}

}  // namespace

SimServo::SimServo(std::uint8_t id, ServoModel<double> model, std::uint16_t initial_units, bool instant)
    : id_(id), model_(model), instant_(instant) {
  if (id > kMaxId) throw std::invalid_argument("servo id must be <= 252");
  model_.validate();
  set_register(xl320::kModelNumber, xl320::kModelNumberValue);
  set_register(xl320::kFirmwareVersion, xl320::kFirmwareVersionValue);
  set_register(xl320::kGoalPosition, initial_units);
  state_.position = state_.goal = units_to_deg(initial_units);
  sync_present_position();
}

std::uint16_t SimServo::register_value(const Register& reg) const {
  std::uint16_t value = registers_[reg.address];
  if (reg.size == 2) value = static_cast<std::uint16_t>(value | (registers_[reg.address + 1] << 8));
  return value;
}

void SimServo::set_register(const Register& reg, std::uint16_t value) {
  registers_[reg.address] = static_cast<std::uint8_t>(value & 0xFF);
  if (reg.size == 2) registers_[reg.address + 1] = static_cast<std::uint8_t>(value >> 8);
}

void SimServo::sync_present_position() {
  set_register(xl320::kPresentPosition, deg_to_units(std::clamp(state_.position, 0.0, kPositionRangeDeg)));
}

std::uint8_t SimServo::write(std::uint16_t address, std::span<const std::uint8_t> data) {
  const Register* reg = xl320::find_register(address);
  if (reg == nullptr || reg->access != Access::ReadWrite) return status_error::kAccess;
  if (data.size() != reg->size) return status_error::kDataLength;

  const std::uint16_t value = reg->size == 2 ? get_u16(data, 0) : data[0];
  if (value > reg->max_value) return status_error::kDataRange;

  set_register(*reg, value);
  if (reg->address == xl320::kGoalPosition.address) {
    state_.goal = units_to_deg(value);
    if (instant_) {
      state_.position = state_.goal;
      sync_present_position();
    }
  }
  return status_error::kNone;
}

std::pair<std::uint8_t, Bytes> SimServo::read(std::uint16_t address, std::uint16_t length) const {
  const Register* reg = xl320::find_register(address);
  if (reg == nullptr) return {status_error::kAccess, {}};
  if (length != reg->size) return {status_error::kDataLength, {}};
  return {status_error::kNone, Bytes(registers_.begin() + address, registers_.begin() + address + length)};
}

void SimServo::step(double dt) {
  if (!torque_enabled() || instant_) return;
  state_ = step_servo(model_, state_, dt);
  sync_present_position();
}

Bytes sim_bus_dispatch(std::span<SimServo> servos, std::span<const std::uint8_t> frame, BusDiagnostics& diag) {
  const DecodeResult decoded = decode_packet(frame);
  const auto* packet = std::get_if<InstructionPacket>(&decoded);
  if (packet == nullptr) {
    // Undecodable frames and stray status frames get no answer on a real bus.
    if (std::holds_alternative<DecodeError>(decoded)) ++diag.dropped_frames;
    return {};
  }
  ++diag.handled_frames;
  return handle(servos, *packet);
}

SimBus::SimBus(std::vector<SimServo> servos, double latency) : servos_(std::move(servos)), latency_(latency) {
  if (!(latency_ >= 0)) throw std::invalid_argument("bus latency must be non-negative");
  std::sort(servos_.begin(), servos_.end(), [](const SimServo& a, const SimServo& b) { return a.id() < b.id(); });
  for (std::size_t i = 1; i < servos_.size(); ++i)
    if (servos_[i].id() == servos_[i - 1].id()) throw std::invalid_argument("duplicate servo id on sim bus");
}

void SimBus::send(std::span<const std::uint8_t> bytes) {
  rx_.feed(bytes);
  while (auto result = rx_.next()) {
    if (const auto* err = std::get_if<DecodeError>(&*result)) {
      if (err->kind != DecodeErrorKind::TruncatedFrame) ++diag_.dropped_frames;
      continue;
    }
    const auto* packet = std::get_if<InstructionPacket>(&*result);
    if (packet == nullptr) continue;
    ++diag_.handled_frames;
    Bytes response = handle(servos_, *packet);
    if (!response.empty()) outbox_.emplace_back(clock_ + latency_, std::move(response));
  }
}

Bytes SimBus::receive(double deadline) {
  Bytes out;
  while (!outbox_.empty() && outbox_.front().first <= deadline) {
    append(out, outbox_.front().second);
    outbox_.pop_front();
  }
  return out;
}

void SimBus::step_servos(double dt) {
  for (auto& s : servos_) s.step(dt);
}

SimServo* SimBus::find(std::uint8_t id) {
  for (auto& s : servos_)
    if (s.id() == id) return &s;
  return nullptr;
}

}  // namespace ocular::protocol
