#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace ocular::protocol {

enum class Access { ReadOnly, ReadWrite };

struct Register {
  const char* name;
  std::uint16_t address;
  std::uint8_t size;
  Access access;
  std::uint16_t max_value;
};

/// Status-frame error byte values.
namespace status_error {
inline constexpr std::uint8_t kNone = 0x00;
inline constexpr std::uint8_t kResultFail = 0x01;
inline constexpr std::uint8_t kInstruction = 0x02;
inline constexpr std::uint8_t kCrc = 0x03;
inline constexpr std::uint8_t kDataRange = 0x04;
inline constexpr std::uint8_t kDataLength = 0x05;
inline constexpr std::uint8_t kDataLimit = 0x06;
inline constexpr std::uint8_t kAccess = 0x07;
}  // namespace status_error

/// The subset of the XL-320 control table this stack uses.
namespace xl320 {

inline constexpr std::uint16_t kModelNumberValue = 350;
inline constexpr std::uint8_t kFirmwareVersionValue = 29;
inline constexpr std::size_t kTableSize = 53;

inline constexpr Register kModelNumber{"MODEL_NUMBER", 0, 2, Access::ReadOnly, 0xFFFF};
inline constexpr Register kFirmwareVersion{"FIRMWARE_VERSION", 2, 1, Access::ReadOnly, 0xFF};
inline constexpr Register kTorqueEnable{"TORQUE_ENABLE", 24, 1, Access::ReadWrite, 1};
inline constexpr Register kGoalPosition{"GOAL_POSITION", 30, 2, Access::ReadWrite, 1023};
inline constexpr Register kMovingSpeed{"MOVING_SPEED", 32, 2, Access::ReadWrite, 2047};
inline constexpr Register kPresentPosition{"PRESENT_POSITION", 37, 2, Access::ReadOnly, 1023};

inline constexpr std::array<Register, 6> kRegisters = {kModelNumber,  kFirmwareVersion, kTorqueEnable,
                                                       kGoalPosition, kMovingSpeed,     kPresentPosition};

/// Register starting exactly at `address`, or nullptr.
constexpr const Register* find_register(std::uint16_t address) {
  for (const auto& reg : kRegisters)
    if (reg.address == address) return &reg;
  return nullptr;
}

}  // namespace xl320
}  // namespace ocular::protocol
