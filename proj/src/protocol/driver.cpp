#include "ocular/protocol/driver.hpp"

#include "ocular/protocol/units.hpp"

#include <set>
#include <stdexcept>

namespace ocular::protocol {
namespace {

void put_u16(Bytes& out, std::uint16_t value) {
  out.push_back(static_cast<std::uint8_t>(value & 0xFF));
  out.push_back(static_cast<std::uint8_t>(value >> 8));
}

InstructionPacket sync_write_packet(std::span<const std::pair<std::uint8_t, std::uint16_t>> goals) {
  std::set<std::uint8_t> seen;
  InstructionPacket packet{kBroadcastId, static_cast<std::uint8_t>(Instruction::SyncWrite), {}};
  put_u16(packet.params, xl320::kGoalPosition.address);
  put_u16(packet.params, xl320::kGoalPosition.size);
  for (const auto& [id, units] : goals) {
    if (!seen.insert(id).second) throw std::invalid_argument("sync_write_goals: duplicate id " + std::to_string(id));
    packet.params.push_back(id);
    put_u16(packet.params, units);
  }
  return packet;
}

}  // namespace

std::pair<CommStatus, std::optional<StatusPacket>> transact(BusTransport& bus, const InstructionPacket& packet,
                                                            double timeout) {
  bus.send(encode_packet(packet));
  FrameDecoder decoder;
  decoder.feed(bus.receive(bus.now() + timeout));
  while (auto result = decoder.next()) {
    const auto* reply = std::get_if<StatusPacket>(&*result);
    if (reply == nullptr || reply->id != packet.id) continue;
    if (reply->error != status_error::kNone)
      return {CommStatus{CommResult::StatusError, reply->error}, *reply};
    return {CommStatus{}, *reply};
  }
  return {CommStatus{CommResult::Timeout, status_error::kNone}, std::nullopt};
}

Reply<std::uint16_t> ping(BusTransport& bus, std::uint8_t id, double timeout) {
  auto [status, reply] = transact(bus, {id, static_cast<std::uint8_t>(Instruction::Ping), {}}, timeout);
  Reply<std::uint16_t> out{status};
  if (status.ok() && reply->params.size() >= 2)
    out.value = static_cast<std::uint16_t>(reply->params[0] | (reply->params[1] << 8));
  return out;
}

CommStatus write_register(BusTransport& bus, std::uint8_t id, const Register& reg, std::uint16_t value,
                          double timeout) {
  InstructionPacket packet{id, static_cast<std::uint8_t>(Instruction::Write), {}};
  put_u16(packet.params, reg.address);
  packet.params.push_back(static_cast<std::uint8_t>(value & 0xFF));
  if (reg.size == 2) packet.params.push_back(static_cast<std::uint8_t>(value >> 8));
  return transact(bus, packet, timeout).first;
}

Reply<std::uint16_t> read_register(BusTransport& bus, std::uint8_t id, const Register& reg, double timeout) {
  InstructionPacket packet{id, static_cast<std::uint8_t>(Instruction::Read), {}};
  put_u16(packet.params, reg.address);
  put_u16(packet.params, reg.size);
  auto [status, reply] = transact(bus, packet, timeout);
  Reply<std::uint16_t> out{status};
  if (status.ok()) {
    if (reply->params.size() != reg.size) return {CommStatus{CommResult::StatusError, status_error::kDataLength}};
    out.value = reply->params[0];
    if (reg.size == 2) out.value = static_cast<std::uint16_t>(out.value | (reply->params[1] << 8));
  }
  return out;
}

CommStatus write_goal_position(BusTransport& bus, std::uint8_t id, double deg, double timeout) {
  return write_register(bus, id, xl320::kGoalPosition, deg_to_units(deg), timeout);
}

Reply<double> read_present_position(BusTransport& bus, std::uint8_t id, double timeout) {
  const auto raw = read_register(bus, id, xl320::kPresentPosition, timeout);
  Reply<double> out{raw.status};
  if (raw.ok()) out.value = units_to_deg(raw.value);
  return out;
}

InstructionPacket sync_write_goals_packet(std::span<const GoalEntry> goals) {
  std::vector<std::pair<std::uint8_t, std::uint16_t>> units;
  units.reserve(goals.size());
  for (const auto& g : goals) units.emplace_back(g.id, deg_to_units(g.deg));
  return sync_write_packet(units);
}

void sync_write_goals(BusTransport& bus, std::span<const GoalEntry> goals) {
  bus.send(encode_packet(sync_write_goals_packet(goals)));
}

void sync_write_goal_units(BusTransport& bus, std::span<const std::pair<std::uint8_t, std::uint16_t>> goals) {
  bus.send(encode_packet(sync_write_packet(goals)));
}

}  // namespace ocular::protocol
