#pragma once

#include <cstdint>
#include <span>

namespace ocular::protocol {

/// CRC-16 used by Dynamixel protocol 2.0: polynomial 0x8005, init 0, no reflection,
/// no final xor. Table-driven.
std::uint16_t crc16(std::span<const std::uint8_t> bytes, std::uint16_t crc = 0);

}  // namespace ocular::protocol
