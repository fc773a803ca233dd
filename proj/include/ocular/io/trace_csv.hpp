#pragma once

#include "ocular/sim/metrics.hpp"
#include "ocular/sim/trace.hpp"

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <string_view>

namespace ocular::io {

inline constexpr std::string_view kTraceHeader =
    "t,eye,u,v,valid,ex,ey,pan_deg,tilt_deg,servo_h_units,servo_v_units,mode,vor_active,head_yaw,head_pitch";

/// Shortest text that reads back to the same double.
std::string format_number(double value);

/// Header line plus one row per record. Image cells are empty when the face is not seen.
void write_trace_csv(std::ostream& out, const sim::Trace& trace);
std::string trace_csv_row(const sim::TraceRecord& r);

struct RunInfo {
  std::string experiment;
  std::uint64_t seed = 0;
  bool vor_disabled = false;
  double settle_band = 0.05;
};

/// Absent settling time and NaN errors serialise as null.
nlohmann::json metrics_json(const sim::Metrics& m, const RunInfo& info, std::size_t records);

}  // namespace ocular::io
