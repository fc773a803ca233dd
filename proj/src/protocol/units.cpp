#include "ocular/protocol/units.hpp"

#include <cmath>
#include <string>

namespace ocular::protocol {

std::uint16_t deg_to_units(double deg) {
  if (!(deg >= 0.0 && deg <= kPositionRangeDeg))
    throw UnitRangeError("position " + std::to_string(deg) + " deg outside [0, 300]");
  return static_cast<std::uint16_t>(std::round(deg * kMaxPositionUnits / kPositionRangeDeg));
}

double units_to_deg(int units) {
  if (units < 0 || units > kMaxPositionUnits)
    throw UnitRangeError("position " + std::to_string(units) + " units outside [0, 1023]");
  return units * kPositionRangeDeg / kMaxPositionUnits;
}

}  // namespace ocular::protocol
