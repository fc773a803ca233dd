#include "ocular/protocol/crc.hpp"
#include "ocular/rng.hpp"
#include "crc_oracle.hpp"

#include <gtest/gtest.h>

#include <string_view>
#include <vector>

namespace ocular::protocol {
namespace {

TEST(CrcTest, EmptyInputIsInitValue) { EXPECT_EQ(crc16({}), 0x0000); }

TEST(CrcTest, PingFrameGolden) {
  const std::vector<std::uint8_t> frame = {0xFF, 0xFF, 0xFD, 0x00, 0x01, 0x03, 0x00, 0x01};
  EXPECT_EQ(test::crc16_bitwise(frame), 0x4E19);
  EXPECT_EQ(crc16(frame), 0x4E19);
  EXPECT_EQ(crc16(frame), crc16(frame));
}

TEST(CrcTest, StandardCheckValue) {
  // CRC-16/BUYPASS check string.
  constexpr std::string_view check = "123456789";
  const std::vector<std::uint8_t> data(check.begin(), check.end());
  EXPECT_EQ(crc16(data), 0xFEE8);
}

TEST(CrcTest, IncrementalMatchesOneShot) {
  const std::vector<std::uint8_t> data = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  const auto head = std::span<const std::uint8_t>(data).first(4);
  const auto tail = std::span<const std::uint8_t>(data).subspan(4);
  EXPECT_EQ(crc16(tail, crc16(head)), crc16(data));
}

TEST(CrcTest, TableMatchesBitwiseOracle) {
  SplitMix64 rng(2024);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::uint8_t> data(rng.next() % 257);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng.next());
    ASSERT_EQ(crc16(data), test::crc16_bitwise(data));
  }
}

}  // namespace
}  // namespace ocular::protocol
