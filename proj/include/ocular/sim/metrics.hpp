#pragma once

#include "ocular/sim/trace.hpp"

#include <optional>

namespace ocular::sim {

struct Metrics {
  std::optional<double> settling_time; // absent when the error never stays in band
  double steady_state_error = 0.0;     // NaN when the final stretch has no valid sample
  double rms_retinal_slip = 0.0;
  double peak_error = 0.0;
  double valid_fraction = 0.0;
};

/// `image_width` normalises retinal slip to half-widths per second.
/// Throws std::invalid_argument on an empty trace.
Metrics compute_metrics(const Trace& trace, double settle_band = 0.05, double image_width = 640.0);

/// Max over both eyes per tick of |e|inf; a tick with a lost face counts as +inf.
std::vector<std::pair<double, double>> error_envelope(const Trace& trace);

}  // namespace ocular::sim
