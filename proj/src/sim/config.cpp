#include "ocular/sim/config.hpp"

#include "ocular/protocol/packet.hpp"
#include "ocular/protocol/units.hpp"

#include <set>
#include <stdexcept>

namespace ocular::sim {

void SimConfig::validate() const {
  if (!(control_rate > 0 && camera_rate > 0)) throw std::invalid_argument("sim: rates must be positive");
  if (camera_rate > control_rate) throw std::invalid_argument("sim: camera_rate must not exceed control_rate");
  if (!(face_width > 0)) throw std::invalid_argument("face: width_m must be positive");
  if (!(bus_latency >= 0)) throw std::invalid_argument("bus: latency_s must be non-negative");
  if (neutral_units > protocol::kMaxPositionUnits) throw std::invalid_argument("bus: neutral_units must be <= 1023");
  const auto ids = servo_ids.all();
  if (std::set<std::uint8_t>(ids.begin(), ids.end()).size() != ids.size())
    throw std::invalid_argument("bus: servo ids must be distinct");
  for (auto id : ids)
    if (id > protocol::kMaxId) throw std::invalid_argument("bus: servo ids must be <= 252");
  geometry.validate();
  servo.validate();
  camera.validate();
  control.validate();

  // Full gaze range must stay on the servo scale.
  const double neutral = protocol::units_to_deg(neutral_units);
  const double reach = rad2deg(geometry.gaze_limits().maxCoeff() * geometry.transmission_ratio());
  if (neutral - reach < 0 || neutral + reach > protocol::kPositionRangeDeg)
    throw std::invalid_argument("bus: gaze limits exceed the servo position range around neutral_units");
}

}  // namespace ocular::sim
