#include "ocular/io/state_frame.hpp"

#include <cmath>
#include <string>

namespace ocular::io {
namespace {

using nlohmann::json;

json maybe(bool valid, double x) { return valid && std::isfinite(x) ? json(x) : json(nullptr); }

double number(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw CommandError(std::string("missing field '") + key + "'");
  if (!it->is_number()) throw CommandError(std::string("field '") + key + "' must be a number");
  const double x = it->get<double>();
  if (!std::isfinite(x)) throw CommandError(std::string("field '") + key + "' must be finite");
  return x;
}

std::optional<double> optional_number(const json& obj, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  return number(obj, key);
}

void only_keys(const json& obj, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw CommandError("unknown field '" + key + "'");
  }
}

std::optional<double> gain(const json& obj, const char* key) {
  auto x = optional_number(obj, key);
  if (x && *x < 0) throw CommandError(std::string("'") + key + "' must be non-negative");
  return x;
}

std::optional<double> limit(const json& obj, const char* key) {
  auto x = optional_number(obj, key);
  if (x && !(*x > 0)) throw CommandError(std::string("'") + key + "' must be positive");
  return x;
}

GainPatch parse_patch(const json& obj) {
  if (!obj.is_object()) throw CommandError("gain set must be an object");
  only_keys(obj, {"kp", "ki", "kd", "integral_limit", "output_limit"});
  return {gain(obj, "kp"), gain(obj, "ki"), gain(obj, "kd"), limit(obj, "integral_limit"),
          limit(obj, "output_limit")};
}

}  // namespace

json state_frame(const std::array<sim::TraceRecord, 2>& records, const Vector3<double>& target) {
  json eyes = json::object();
  for (const auto& r : records) {
    eyes[eye_name(r.eye)] = {
        {"u", maybe(r.valid, r.u)},         {"v", maybe(r.valid, r.v)},
        {"valid", r.valid},                 {"ex", maybe(r.valid, r.ex)},
        {"ey", maybe(r.valid, r.ey)},       {"pan_deg", r.pan_deg},
        {"tilt_deg", r.tilt_deg},           {"mode", mode_name(r.mode)},
        {"vor_active", r.vor_active},
    };
  }
  return {
      {"t", records[0].t},
      {"eyes", eyes},
      {"head", {{"yaw", records[0].head_yaw}, {"pitch", records[0].head_pitch}}},
      {"target", {{"x", target.x()}, {"y", target.y()}, {"z", target.z()}}},
  };
}

void GainPatch::apply(PidGains<double>& gains) const {
  if (kp) gains.kp = *kp;
  if (ki) gains.ki = *ki;
  if (kd) gains.kd = *kd;
  if (integral_limit) gains.integral_limit = *integral_limit;
  if (output_limit) gains.output_limit = *output_limit;
}

SupervisorConfig<double> SetGains::applied_to(SupervisorConfig<double> cfg) const {
  pursuit.apply(cfg.pursuit);
  saccade.apply(cfg.saccade);
  if (vor_gain) cfg.vor_gain = *vor_gain;
  return cfg;
}

ClientCommand parse_command(std::string_view text) {
  json msg;
  try {
    msg = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CommandError(std::string("malformed JSON: ") + e.what());
  }
  if (!msg.is_object()) throw CommandError("command must be a JSON object");
  const auto cmd = msg.find("cmd");
  if (cmd == msg.end() || !cmd->is_string()) throw CommandError("missing string field 'cmd'");
  const std::string name = cmd->get<std::string>();

  if (name == "set_target") {
    only_keys(msg, {"cmd", "x", "y", "z"});
    SetTarget c{Vector3<double>(number(msg, "x"), number(msg, "y"), number(msg, "z"))};
    if (!(c.position.z() > 0)) throw CommandError("target z must be positive (in front of the robot)");
    return c;
  }
  if (name == "set_head") {
    only_keys(msg, {"cmd", "yaw", "pitch"});
    SetHead c{optional_number(msg, "yaw"), optional_number(msg, "pitch")};
    if (!c.yaw && !c.pitch) throw CommandError("set_head needs 'yaw' and/or 'pitch'");
    return c;
  }
  if (name == "set_gains") {
    only_keys(msg, {"cmd", "kp", "ki", "kd", "pursuit", "saccade", "vor_gain", "vor_enabled"});
    SetGains c;
    if (msg.contains("pursuit")) c.pursuit = parse_patch(msg["pursuit"]);
    if (msg.contains("saccade")) c.saccade = parse_patch(msg["saccade"]);
    if (auto kp = gain(msg, "kp")) c.pursuit.kp = kp;
    if (auto ki = gain(msg, "ki")) c.pursuit.ki = ki;
    if (auto kd = gain(msg, "kd")) c.pursuit.kd = kd;
    c.vor_gain = gain(msg, "vor_gain");
    if (msg.contains("vor_enabled")) {
      if (!msg["vor_enabled"].is_boolean()) throw CommandError("'vor_enabled' must be a boolean");
      c.vor_enabled = msg["vor_enabled"].get<bool>();
    }
    return c;
  }
  if (name == "reset") {
    only_keys(msg, {"cmd"});
    return Reset{};
  }
  throw CommandError("unknown command '" + name + "'");
}

json error_frame(std::string_view message) { return {{"error", message}}; }

}  // namespace ocular::io
