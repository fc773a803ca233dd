#include "ocular/io/trace_csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace ocular::io {

std::string format_number(double value) {
  if (value == 0.0) return "0"; // folds -0
  std::array<char, 32> buf;
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return ec == std::errc() ? std::string(buf.data(), end) : std::string("nan");
}

std::string trace_csv_row(const sim::TraceRecord& r) {
  std::string row;
  row.reserve(128);
  const auto cell = [&row](const std::string& s) {
    row += s;
    row += ',';
  };
  const auto image = [&](double x) { cell(r.valid ? format_number(x) : std::string()); };

  cell(format_number(r.t));
  cell(eye_name(r.eye));
  image(r.u);
  image(r.v);
  cell(r.valid ? "1" : "0");
  image(r.ex);
  image(r.ey);
  cell(format_number(r.pan_deg));
  cell(format_number(r.tilt_deg));
  cell(std::to_string(r.servo_h_units));
  cell(std::to_string(r.servo_v_units));
  cell(mode_name(r.mode));
  cell(r.vor_active ? "1" : "0");
  cell(format_number(r.head_yaw));
  row += format_number(r.head_pitch);
  return row;
}

void write_trace_csv(std::ostream& out, const sim::Trace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace) out << trace_csv_row(r) << '\n';
}

nlohmann::json metrics_json(const sim::Metrics& m, const RunInfo& info, std::size_t records) {
  const auto number = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["experiment"] = info.experiment;
  j["seed"] = info.seed;
  j["vor_disabled"] = info.vor_disabled;
  j["settle_band"] = info.settle_band;
  j["settling_time"] = m.settling_time ? nlohmann::json(*m.settling_time) : nlohmann::json(nullptr);
  j["steady_state_error"] = number(m.steady_state_error);
  j["rms_retinal_slip"] = number(m.rms_retinal_slip);
  j["peak_error"] = number(m.peak_error);
  j["valid_fraction"] = number(m.valid_fraction);
  j["records"] = records;
  return j;
}

}  // namespace ocular::io
