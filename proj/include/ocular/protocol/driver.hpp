#pragma once

#include "ocular/protocol/bus.hpp"
#include "ocular/protocol/control_table.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

namespace ocular::protocol {

inline constexpr double kDefaultTimeout = 0.010; // s

enum class CommResult { Success, Timeout, StatusError };

struct CommStatus {
  CommResult result = CommResult::Success;
  std::uint8_t servo_error = status_error::kNone;

  bool ok() const { return result == CommResult::Success; }
};

template <typename T>
struct Reply {
  CommStatus status;
  T value{};

  bool ok() const { return status.ok(); }
};

/// Sends one instruction and waits for the status frame from `packet.id`.
std::pair<CommStatus, std::optional<StatusPacket>> transact(BusTransport& bus, const InstructionPacket& packet,
                                                            double timeout = kDefaultTimeout);

Reply<std::uint16_t> ping(BusTransport& bus, std::uint8_t id, double timeout = kDefaultTimeout);

CommStatus write_register(BusTransport& bus, std::uint8_t id, const Register& reg, std::uint16_t value,
                          double timeout = kDefaultTimeout);
Reply<std::uint16_t> read_register(BusTransport& bus, std::uint8_t id, const Register& reg,
                                   double timeout = kDefaultTimeout);

/// Absolute servo angle on the 0..300 deg scale.
CommStatus write_goal_position(BusTransport& bus, std::uint8_t id, double deg, double timeout = kDefaultTimeout);
Reply<double> read_present_position(BusTransport& bus, std::uint8_t id, double timeout = kDefaultTimeout);

struct GoalEntry {
  std::uint8_t id;
  double deg;
};

/// Builds the SYNC_WRITE frame for GOAL_POSITION. Throws std::invalid_argument on duplicate ids.
InstructionPacket sync_write_goals_packet(std::span<const GoalEntry> goals);

/// SYNC_WRITE of GOAL_POSITION to several servos. No status is returned.
void sync_write_goals(BusTransport& bus, std::span<const GoalEntry> goals);

/// Same, with goals already quantised to position units.
void sync_write_goal_units(BusTransport& bus, std::span<const std::pair<std::uint8_t, std::uint16_t>> goals);

}  // namespace ocular::protocol
