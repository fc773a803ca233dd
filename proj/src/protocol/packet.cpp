#include "ocular/protocol/packet.hpp"

#include "ocular/protocol/crc.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace ocular::protocol {
namespace {

constexpr std::array<std::uint8_t, 4> kHeader = {0xFF, 0xFF, 0xFD, 0x00};

bool ends_with_marker(std::uint8_t a, std::uint8_t b, std::uint8_t c) {
  return a == 0xFF && b == 0xFF && c == 0xFD;
}

void put_u16(Bytes& out, std::size_t value) {
  out.push_back(static_cast<std::uint8_t>(value & 0xFF));
  out.push_back(static_cast<std::uint8_t>((value >> 8) & 0xFF));
}

Bytes frame(std::uint8_t id, std::uint8_t instruction, std::span<const std::uint8_t> body) {
  const Bytes stuffed = stuff(body);
  const std::size_t length = stuffed.size() + 3;
  if (length > 0xFFFF) throw EncodeError("frame length exceeds 16 bits after stuffing");

  Bytes out(kHeader.begin(), kHeader.end());
  out.reserve(kHeaderSize + length);
  out.push_back(id);
  put_u16(out, length);
  out.push_back(instruction);
  out.insert(out.end(), stuffed.begin(), stuffed.end());
  put_u16(out, crc16(out));
  return out;
}

DecodeError error(DecodeErrorKind kind, std::string detail) { return DecodeError{kind, std::move(detail)}; }

std::string hex_byte(std::uint8_t b) {
  static constexpr char kDigits[] = "0123456789abcdef";
  return {kDigits[b >> 4], kDigits[b & 0xF]};
}

}  // namespace

const char* instruction_name(std::uint8_t code) {
  switch (static_cast<Instruction>(code)) {
    case Instruction::Ping: return "PING";
    case Instruction::Read: return "READ";
    case Instruction::Write: return "WRITE";
    case Instruction::SyncWrite: return "SYNC_WRITE";
    case Instruction::Status: return "STATUS";
  }
  return "UNKNOWN";
}

const char* decode_error_name(DecodeErrorKind kind) {
  switch (kind) {
    case DecodeErrorKind::BadHeader: return "BadHeader";
    case DecodeErrorKind::LengthMismatch: return "LengthMismatch";
    case DecodeErrorKind::CrcMismatch: return "CrcMismatch";
    case DecodeErrorKind::BadStuffing: return "BadStuffing";
    case DecodeErrorKind::TruncatedFrame: return "TruncatedFrame";
  }
  return "?";
}

bool valid_id(std::uint8_t id) { return id <= kMaxId || id == kBroadcastId; }

Bytes stuff(std::span<const std::uint8_t> payload) {
  Bytes out;
  out.reserve(payload.size() + payload.size() / 3 + 1);
  std::size_t run = 0; // bytes since the last inserted FD
  for (std::uint8_t b : payload) {
    out.push_back(b);
    ++run;
    const std::size_t n = out.size();
    if (run >= 3 && ends_with_marker(out[n - 3], out[n - 2], out[n - 1])) {
      out.push_back(0xFD);
      run = 0;
    }
  }
  return out;
}

Bytes destuff(std::span<const std::uint8_t> stuffed) {
  Bytes out;
  out.reserve(stuffed.size());
  std::size_t run = 0;
  for (std::size_t i = 0; i < stuffed.size(); ++i) {
    out.push_back(stuffed[i]);
    ++run;
    const std::size_t n = out.size();
    if (run >= 3 && ends_with_marker(out[n - 3], out[n - 2], out[n - 1])) {
      if (i + 1 >= stuffed.size() || stuffed[i + 1] != 0xFD)
        throw FramingError("FF FF FD not followed by stuffing byte FD");
      ++i;
      run = 0;
    }
  }
  return out;
}

Bytes encode_packet(const InstructionPacket& packet) {
  if (!valid_id(packet.id)) throw EncodeError("invalid servo id " + std::to_string(packet.id));
  if (packet.params.size() > kMaxParams) throw EncodeError("params exceed 65532 bytes");
  return frame(packet.id, packet.instruction, packet.params);
}

Bytes encode_status(const StatusPacket& packet) {
  if (packet.id > kMaxId) throw EncodeError("invalid status id " + std::to_string(packet.id));
  if (packet.params.size() + 1 > kMaxParams) throw EncodeError("params exceed 65531 bytes");
  Bytes body;
  body.reserve(packet.params.size() + 1);
  body.push_back(packet.error);
  body.insert(body.end(), packet.params.begin(), packet.params.end());
  return frame(packet.id, static_cast<std::uint8_t>(Instruction::Status), body);
}

DecodeResult decode_packet(std::span<const std::uint8_t> bytes) {
  for (std::size_t i = 0; i < kHeader.size() && i < bytes.size(); ++i) {
    if (bytes[i] != kHeader[i])
      return error(DecodeErrorKind::BadHeader,
                   "header byte " + std::to_string(i) + " is 0x" + hex_byte(bytes[i]) + ", expected 0x" +
                       hex_byte(kHeader[i]));
  }
  if (bytes.size() < kHeaderSize + 3) return error(DecodeErrorKind::TruncatedFrame, "frame shorter than minimum");

  const std::uint8_t id = bytes[4];
  const std::size_t length = bytes[5] | (static_cast<std::size_t>(bytes[6]) << 8);
  if (length < 3) return error(DecodeErrorKind::LengthMismatch, "length field " + std::to_string(length) + " < 3");

  const std::size_t total = kHeaderSize + length;
  if (bytes.size() < total)
    return error(DecodeErrorKind::TruncatedFrame,
                 "have " + std::to_string(bytes.size()) + " of " + std::to_string(total) + " bytes");
  if (bytes.size() > total)
    return error(DecodeErrorKind::LengthMismatch, "length field " + std::to_string(length) + " leaves " +
                                                      std::to_string(bytes.size() - total) + " trailing bytes");

  const std::uint16_t expected = crc16(bytes.first(total - 2));
  const std::uint16_t received = bytes[total - 2] | static_cast<std::uint16_t>(bytes[total - 1] << 8);
  if (expected != received)
    return error(DecodeErrorKind::CrcMismatch,
                 "crc field 0x" + hex_byte(received >> 8) + hex_byte(received & 0xFF) + ", computed 0x" +
                     hex_byte(expected >> 8) + hex_byte(expected & 0xFF));

  if (!valid_id(id)) return error(DecodeErrorKind::BadHeader, "id field " + std::to_string(id) + " is reserved");

  const std::uint8_t instruction = bytes[kHeaderSize];
  Bytes body;
  try {
    body = destuff(bytes.subspan(kHeaderSize + 1, length - 3));
  } catch (const FramingError& e) {
    return error(DecodeErrorKind::BadStuffing, e.what());
  }

  if (instruction == static_cast<std::uint8_t>(Instruction::Status)) {
    if (body.empty()) return error(DecodeErrorKind::LengthMismatch, "status frame without error byte");
    return StatusPacket{id, body.front(), Bytes(body.begin() + 1, body.end())};
  }
  if (body.size() > kMaxParams) return error(DecodeErrorKind::LengthMismatch, "params exceed 65532 bytes");
  return InstructionPacket{id, instruction, std::move(body)};
}

void FrameDecoder::feed(std::span<const std::uint8_t> bytes) { buffer_.insert(buffer_.end(), bytes.begin(), bytes.end()); }

std::optional<DecodeResult> FrameDecoder::next() {
  // Skip to the first candidate header. A partial header at the tail is kept.
  std::size_t start = 0;
  while (start < buffer_.size()) {
    std::size_t matched = 0;
    while (matched < kHeader.size() && start + matched < buffer_.size() &&
           buffer_[start + matched] == kHeader[matched])
      ++matched;
    if (matched == kHeader.size() || start + matched == buffer_.size()) break;
    ++start;
  }
  buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(start));
  discarded_ += start;

  if (buffer_.size() < kHeaderSize) return std::nullopt;
  const std::size_t length = buffer_[5] | (static_cast<std::size_t>(buffer_[6]) << 8);
  const std::size_t total = kHeaderSize + std::max<std::size_t>(length, 3);
  if (length >= 3 && buffer_.size() < total) {
    // The candidate may be a stray header whose length field points past real
    // traffic. A complete valid frame further on wins.
    if (auto later = complete_frame_after(1)) return later;
    return std::nullopt;
  }

  const Bytes candidate(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(std::min(total, buffer_.size())));
  DecodeResult result = length < 3 ? DecodeResult{error(DecodeErrorKind::LengthMismatch, "length field < 3")}
                                   : decode_packet(candidate);
  if (std::holds_alternative<DecodeError>(result)) {
    buffer_.pop_front();
    ++discarded_;
  } else {
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(total));
  }
  return result;
}

std::optional<DecodeResult> FrameDecoder::complete_frame_after(std::size_t from) {
  for (std::size_t at = from; at + kHeaderSize <= buffer_.size(); ++at) {
    if (!std::equal(kHeader.begin(), kHeader.end(), buffer_.begin() + static_cast<std::ptrdiff_t>(at))) continue;
    const std::size_t length = buffer_[at + 5] | (static_cast<std::size_t>(buffer_[at + 6]) << 8);
    const std::size_t total = kHeaderSize + length;
    if (length < 3 || at + total > buffer_.size()) continue;
    const auto first = buffer_.begin() + static_cast<std::ptrdiff_t>(at);
    const Bytes candidate(first, first + static_cast<std::ptrdiff_t>(total));
    DecodeResult result = decode_packet(candidate);
    if (std::holds_alternative<DecodeError>(result)) continue;
    buffer_.erase(buffer_.begin(), first + static_cast<std::ptrdiff_t>(total));
    discarded_ += at;
    return result;
  }
  return std::nullopt;
}

std::string to_hex(std::span<const std::uint8_t> bytes, bool grouped) {
  std::string out;
  out.reserve(bytes.size() * 3);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (grouped && i > 0 && i % 2 == 0) out.push_back(' ');
    out += hex_byte(bytes[i]);
  }
  return out;
}

Bytes from_hex(std::string_view text) {
  std::string digits;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (!std::isxdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument(std::string("not a hex digit: '") + c + "'");
    digits.push_back(c);
  }
  if (digits.size() % 2 != 0) throw std::invalid_argument("odd number of hex digits");
  Bytes out;
  out.reserve(digits.size() / 2);
  for (std::size_t i = 0; i < digits.size(); i += 2)
    out.push_back(static_cast<std::uint8_t>(std::stoul(digits.substr(i, 2), nullptr, 16)));
  return out;
}

std::string describe(const Packet& packet) {
  std::ostringstream os;
  if (const auto* p = std::get_if<InstructionPacket>(&packet)) {
    os << "instruction packet\n"
       << "  id:          " << static_cast<int>(p->id) << (p->id == kBroadcastId ? " (broadcast)" : "") << "\n"
       << "  instruction: " << instruction_name(p->instruction) << " (0x" << hex_byte(p->instruction) << ")\n"
       << "  params:      [" << to_hex(p->params) << "] (" << p->params.size() << " bytes)\n";
  } else {
    const auto& s = std::get<StatusPacket>(packet);
    os << "status packet\n"
       << "  id:          " << static_cast<int>(s.id) << "\n"
       << "  error:       0x" << hex_byte(s.error) << "\n"
       << "  params:      [" << to_hex(s.params) << "] (" << s.params.size() << " bytes)\n";
  }
  return os.str();
}

}  // namespace ocular::protocol
