#pragma once

#include <cstdint>
#include <stdexcept>

namespace ocular::protocol {

// XL-320 position scale: 0..1023 over 0..300 degrees.
inline constexpr double kPositionRangeDeg = 300.0;
inline constexpr int kMaxPositionUnits = 1023;
inline constexpr double kDegPerUnit = kPositionRangeDeg / kMaxPositionUnits;

class UnitRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Rounds half away from zero. Throws UnitRangeError outside [0, 300].
std::uint16_t deg_to_units(double deg);

/// Throws UnitRangeError outside [0, 1023].
double units_to_deg(int units);

}  // namespace ocular::protocol
