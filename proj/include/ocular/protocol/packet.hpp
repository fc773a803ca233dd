#pragma once

// Dynamixel protocol 2.0 framing:
//
//   FF FF FD 00 | id | len_lo len_hi | instruction | params (stuffed) | crc_lo crc_hi
//
// len counts the instruction byte, the stuffed params and the two CRC bytes.
// Status frames carry instruction 0x55 followed by the error byte; the error
// byte and params are stuffed together.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ocular::protocol {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::uint8_t kBroadcastId = 0xFE;
inline constexpr std::uint8_t kMaxId = 252;
inline constexpr std::size_t kMaxParams = 65532;
inline constexpr std::size_t kHeaderSize = 7; // FF FF FD 00 id len_lo len_hi

enum class Instruction : std::uint8_t {
  Ping = 0x01,
  Read = 0x02,
  Write = 0x03,
  SyncWrite = 0x83,
  Status = 0x55,
};

const char* instruction_name(std::uint8_t code);

struct InstructionPacket {
  std::uint8_t id = 0;
  std::uint8_t instruction = static_cast<std::uint8_t>(Instruction::Ping);
  Bytes params;

  friend bool operator==(const InstructionPacket&, const InstructionPacket&) = default;
};

struct StatusPacket {
  std::uint8_t id = 0;
  std::uint8_t error = 0;
  Bytes params;

  friend bool operator==(const StatusPacket&, const StatusPacket&) = default;
};

class EncodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FramingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool valid_id(std::uint8_t id);

/// Inserts an extra 0xFD after every FF FF FD in the payload.
Bytes stuff(std::span<const std::uint8_t> payload);

/// Inverse of stuff(). Throws FramingError if FF FF FD is not followed by FD.
Bytes destuff(std::span<const std::uint8_t> stuffed);

Bytes encode_packet(const InstructionPacket& packet);
Bytes encode_status(const StatusPacket& packet);

enum class DecodeErrorKind {
  BadHeader,
  LengthMismatch,
  CrcMismatch,
  BadStuffing,
  TruncatedFrame, // more bytes needed; not fatal for stream decoding
};

const char* decode_error_name(DecodeErrorKind kind);

struct DecodeError {
  DecodeErrorKind kind;
  std::string detail;
};

using Packet = std::variant<InstructionPacket, StatusPacket>;
using DecodeResult = std::variant<InstructionPacket, StatusPacket, DecodeError>;

/// Decodes exactly one frame occupying all of `bytes`.
DecodeResult decode_packet(std::span<const std::uint8_t> bytes);

/// Incremental frame decoder for byte streams. Leading garbage is skipped until
/// a header is found; a frame that fails validation is reported and the decoder
/// resynchronises one byte past its header. While an incomplete frame is
/// pending, a complete valid frame starting later in the buffer is returned and
/// the bytes before it are dropped.
class FrameDecoder {
 public:
  void feed(std::span<const std::uint8_t> bytes);

  /// Next complete frame or error, or nullopt when more input is needed.
  std::optional<DecodeResult> next();

  std::size_t buffered() const { return buffer_.size(); }
  std::size_t discarded_bytes() const { return discarded_; }

 private:
  std::optional<DecodeResult> complete_frame_after(std::size_t from);

  std::deque<std::uint8_t> buffer_;
  std::size_t discarded_ = 0;
};

std::string to_hex(std::span<const std::uint8_t> bytes, bool grouped = false);

/// Parses hex text, ignoring whitespace. Throws std::invalid_argument on bad input.
Bytes from_hex(std::string_view text);

std::string describe(const Packet& packet);

}  // namespace ocular::protocol
