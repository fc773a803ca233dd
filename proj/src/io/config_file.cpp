#include "ocular/io/config_file.hpp"

#include <tomlplusplus/toml.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace ocular::io {
namespace {

// Walks one TOML table, remembering which keys were read so that anything
// left over can be reported as unknown.
class Section {
 public:
  Section(const toml::table* table, std::string path) : table_(table), path_(std::move(path)) {}

  void get(std::string_view key, double& out) {
    if (const toml::node* node = take(key)) {
      if (const auto* f = node->as_floating_point())
        out = f->get();
      else if (const auto* i = node->as_integer())
        out = static_cast<double>(i->get());
      else
        fail(key, "expected a number");
      if (!std::isfinite(out)) fail(key, "expected a finite number");
    }
  }

  template <typename Int>
  void get_int(std::string_view key, Int& out) {
    if (const toml::node* node = take(key)) {
      const auto* i = node->as_integer();
      if (i == nullptr) fail(key, "expected an integer");
      const std::int64_t v = i->get();
      if (v < 0 || static_cast<std::uint64_t>(v) > std::numeric_limits<Int>::max()) fail(key, "integer out of range");
      out = static_cast<Int>(v);
    }
  }

  void get_ids(std::string_view key, sim::ServoIds& ids) {
    if (const toml::node* node = take(key)) {
      const auto* arr = node->as_array();
      if (arr == nullptr || arr->size() != 4) fail(key, "expected an array of 4 servo ids");
      std::uint8_t v[4];
      for (std::size_t k = 0; k < 4; ++k) {
        const auto* i = arr->get(k)->as_integer();
        if (i == nullptr || i->get() < 0 || i->get() > 252) fail(key, "servo ids must be integers in 0..252");
        v[k] = static_cast<std::uint8_t>(i->get());
      }
      ids = {v[0], v[1], v[2], v[3]};
    }
  }

  Section sub(std::string_view key) {
    const toml::node* node = take(key);
    if (node != nullptr && !node->is_table()) fail(key, "expected a table");
    return Section(node ? node->as_table() : nullptr, qualified(key));
  }

  void finish() const {
    if (table_ == nullptr) return;
    for (auto&& [key, node] : *table_) {
      if (!seen_.count(std::string(key.str())))
        throw ConfigError("unknown key '" + qualified(key.str()) + "'" + where(node));
    }
  }

 private:
  const toml::node* take(std::string_view key) {
    if (table_ == nullptr) return nullptr;
    seen_.insert(std::string(key));
    return table_->get(key);
  }

  std::string qualified(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  static std::string where(const toml::node& node) {
    const auto& src = node.source();
    if (!src.begin) return {};
    return " (line " + std::to_string(src.begin.line) + ")";
  }

  [[noreturn]] void fail(std::string_view key, std::string_view what) const {
    throw ConfigError(qualified(key) + ": " + std::string(what) + where(*table_->get(key)));
  }

  const toml::table* table_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_gains(Section s, PidGains<double>& g) {
  s.get("kp", g.kp);
  s.get("ki", g.ki);
  s.get("kd", g.kd);
  s.get("integral_limit", g.integral_limit);
  s.get("output_limit", g.output_limit);
  s.finish();
}

}  // namespace

AppConfig parse_config(std::string_view text, std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    throw ConfigError(os.str());
  }

  AppConfig cfg;
  auto& sc = cfg.sim;
  Section top(&root, "");

  {
    Section s = top.sub("geometry");
    s.get("eyeball_radius_mm", sc.geometry.eyeball_radius);
    s.get("attachment_angle_deg", sc.geometry.attachment_angle);
    s.get("bobbin_radius_mm", sc.geometry.bobbin_radius);
    s.get("gaze_limit_pan_deg", sc.geometry.gaze_limit_pan);
    s.get("gaze_limit_tilt_deg", sc.geometry.gaze_limit_tilt);
    s.get("interocular_distance_mm", sc.geometry.interocular_distance);
    s.finish();
  }
  {
    Section s = top.sub("servo_model");
    s.get("max_speed_dps", sc.servo.max_speed);
    s.get("time_constant_s", sc.servo.time_constant);
    s.finish();
  }
  {
    Section s = top.sub("camera");
    s.get("width_px", sc.camera.width);
    s.get("height_px", sc.camera.height);
    s.get("horizontal_fov_deg", sc.camera.horizontal_fov);
    s.finish();
  }
  {
    Section s = top.sub("face");
    s.get("width_m", sc.face_width);
    s.get("noise_px", cfg.noise_px);
    s.finish();
  }
  {
    Section s = top.sub("control");
    s.get("saccade_threshold", sc.control.saccade_threshold);
    s.get("fixation_threshold", sc.control.fixation_threshold);
    s.get("vor_rate_threshold", sc.control.vor_rate_threshold);
    s.get("vor_gain", sc.control.vor_gain);
    s.get("saccade_rate", sc.control.saccade_rate);
    read_gains(s.sub("pursuit"), sc.control.pursuit);
    read_gains(s.sub("saccade"), sc.control.saccade);
    s.finish();
  }
  {
    Section s = top.sub("sim");
    s.get("control_rate_hz", sc.control_rate);
    s.get("camera_rate_hz", sc.camera_rate);
    s.get_int("seed", cfg.seed);
    s.get("settle_band", cfg.settle_band);
    s.finish();
  }
  {
    Section s = top.sub("bus");
    s.get("latency_s", sc.bus_latency);
    s.get_int("neutral_units", sc.neutral_units);
    s.get_ids("servo_ids", sc.servo_ids);
    s.finish();
  }
  {
    Section scen = top.sub("scenario");
    Section s = scen.sub("saccade");
    s.get("offset_frac", cfg.saccade.offset_frac);
    s.get("distance_m", cfg.saccade.distance);
    s.get("duration_s", cfg.saccade.duration);
    s.finish();
    s = scen.sub("pursuit");
    s.get("frequency_hz", cfg.pursuit.frequency);
    s.get("amplitude_deg", cfg.pursuit.amplitude);
    s.get("distance_m", cfg.pursuit.distance);
    s.get("duration_s", cfg.pursuit.duration);
    s.finish();
    s = scen.sub("vergence");
    s.get("z_start_m", cfg.vergence.z_start);
    s.get("z_end_m", cfg.vergence.z_end);
    s.get("duration_s", cfg.vergence.duration);
    s.finish();
    s = scen.sub("vor");
    s.get("frequency_hz", cfg.vor.frequency);
    s.get("amplitude_deg", cfg.vor.amplitude);
    s.get("distance_m", cfg.vor.distance);
    s.get("duration_s", cfg.vor.duration);
    s.finish();
    scen.finish();
  }
  top.finish();

  if (!(cfg.noise_px >= 0)) throw ConfigError("face.noise_px must be non-negative");
  if (!(cfg.settle_band > 0)) throw ConfigError("sim.settle_band must be positive");
  try {
    sc.validate();
    for (auto name : kExperiments) build_scenario(cfg, name, cfg.seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

bool is_experiment(std::string_view name) {
  return std::find(std::begin(kExperiments), std::end(kExperiments), name) != std::end(kExperiments);
}

sim::Scenario build_scenario(const AppConfig& cfg, std::string_view experiment, std::uint64_t seed,
                             bool vor_disabled) {
  sim::Scenario s;
  if (experiment == "saccade")
    s = sim::scenario_saccade(cfg.saccade, cfg.sim.camera);
  else if (experiment == "pursuit")
    s = sim::scenario_pursuit(cfg.pursuit, cfg.sim.geometry);
  else if (experiment == "vergence")
    s = sim::scenario_vergence(cfg.vergence, cfg.sim.geometry);
  else if (experiment == "vor")
    s = sim::scenario_vor(cfg.vor);
  else
    throw std::invalid_argument("unknown experiment '" + std::string(experiment) +
                                "' (expected saccade, pursuit, vergence or vor)");
  s.noise_std = cfg.noise_px;
  s.seed = seed;
  s.vor_disabled = vor_disabled;
  return s;
}

}  // namespace ocular::io
