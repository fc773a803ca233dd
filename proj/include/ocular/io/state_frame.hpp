#pragma once

#include "ocular/control.hpp"
#include "ocular/sim/trace.hpp"
#include "ocular/vision.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <variant>

namespace ocular::io {

/// {t, eyes: {L: {...}, R: {...}}, head: {yaw, pitch}, target: {x, y, z}}.
/// Angles in degrees, target in metres. Image fields are null for a lost face.
nlohmann::json state_frame(const std::array<sim::TraceRecord, 2>& records, const Vector3<double>& target);

class CommandError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SetTarget {
  Vector3<double> position;
};

/// Degrees; an absent field keeps its current value.
struct SetHead {
  std::optional<double> yaw;
  std::optional<double> pitch;
};

struct GainPatch {
  std::optional<double> kp, ki, kd, integral_limit, output_limit;

  void apply(PidGains<double>& gains) const;
};

struct SetGains {
  GainPatch pursuit; // flat kp/ki/kd keys land here too
  GainPatch saccade;
  std::optional<double> vor_gain;
  std::optional<bool> vor_enabled;

  SupervisorConfig<double> applied_to(SupervisorConfig<double> cfg) const;
};

struct Reset {};

using ClientCommand = std::variant<SetTarget, SetHead, SetGains, Reset>;

/// Throws CommandError naming what is wrong.
ClientCommand parse_command(std::string_view text);

nlohmann::json error_frame(std::string_view message);

}  // namespace ocular::io
