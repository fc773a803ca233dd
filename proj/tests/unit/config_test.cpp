#include "ocular/io/config_file.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace ocular::io {
namespace {

const std::filesystem::path kDefaultToml = std::filesystem::path(OCULAR_SOURCE_DIR) / "config" / "default.toml";

std::string error_of(std::string_view text) {
  try {
    parse_config(text, "test.toml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ConfigTest, ShippedDefaultMatchesBuiltIn) {
  const AppConfig file = load_config(kDefaultToml);
  const AppConfig code;
  const auto& a = file.sim;
  const auto& b = code.sim;
  EXPECT_EQ(a.control_rate, b.control_rate);
  EXPECT_EQ(a.camera_rate, b.camera_rate);
  EXPECT_EQ(a.geometry.eyeball_radius, b.geometry.eyeball_radius);
  EXPECT_EQ(a.geometry.attachment_angle, b.geometry.attachment_angle);
  EXPECT_EQ(a.geometry.bobbin_radius, b.geometry.bobbin_radius);
  EXPECT_EQ(a.geometry.gaze_limit_pan, b.geometry.gaze_limit_pan);
  EXPECT_EQ(a.geometry.gaze_limit_tilt, b.geometry.gaze_limit_tilt);
  EXPECT_EQ(a.geometry.interocular_distance, b.geometry.interocular_distance);
  EXPECT_EQ(a.servo.max_speed, b.servo.max_speed);
  EXPECT_EQ(a.servo.time_constant, b.servo.time_constant);
  EXPECT_EQ(a.camera.width, b.camera.width);
  EXPECT_EQ(a.camera.height, b.camera.height);
  EXPECT_EQ(a.camera.horizontal_fov, b.camera.horizontal_fov);
  EXPECT_EQ(a.face_width, b.face_width);
  EXPECT_EQ(a.bus_latency, b.bus_latency);
  EXPECT_EQ(a.neutral_units, b.neutral_units);
  EXPECT_EQ(a.servo_ids.all(), b.servo_ids.all());
  const auto& ca = a.control;
  const auto& cb = b.control;
  EXPECT_EQ(ca.saccade_threshold, cb.saccade_threshold);
  EXPECT_EQ(ca.fixation_threshold, cb.fixation_threshold);
  EXPECT_EQ(ca.vor_rate_threshold, cb.vor_rate_threshold);
  EXPECT_EQ(ca.vor_gain, cb.vor_gain);
  EXPECT_EQ(ca.saccade_rate, cb.saccade_rate);
  for (auto [ga, gb] : {std::pair{ca.pursuit, cb.pursuit}, std::pair{ca.saccade, cb.saccade}}) {
    EXPECT_EQ(ga.kp, gb.kp);
    EXPECT_EQ(ga.ki, gb.ki);
    EXPECT_EQ(ga.kd, gb.kd);
    EXPECT_EQ(ga.integral_limit, gb.integral_limit);
    EXPECT_EQ(ga.output_limit, gb.output_limit);
  }
  EXPECT_EQ(file.noise_px, code.noise_px);
  EXPECT_EQ(file.seed, code.seed);
  EXPECT_EQ(file.settle_band, code.settle_band);
  EXPECT_EQ(file.saccade.offset_frac, code.saccade.offset_frac);
  EXPECT_EQ(file.saccade.distance, code.saccade.distance);
  EXPECT_EQ(file.saccade.duration, code.saccade.duration);
  EXPECT_EQ(file.pursuit.frequency, code.pursuit.frequency);
  EXPECT_EQ(file.pursuit.amplitude, code.pursuit.amplitude);
  EXPECT_EQ(file.pursuit.distance, code.pursuit.distance);
  EXPECT_EQ(file.pursuit.duration, code.pursuit.duration);
  EXPECT_EQ(file.vergence.z_start, code.vergence.z_start);
  EXPECT_EQ(file.vergence.z_end, code.vergence.z_end);
  EXPECT_EQ(file.vergence.duration, code.vergence.duration);
  EXPECT_EQ(file.vor.frequency, code.vor.frequency);
  EXPECT_EQ(file.vor.amplitude, code.vor.amplitude);
  EXPECT_EQ(file.vor.distance, code.vor.distance);
  EXPECT_EQ(file.vor.duration, code.vor.duration);
}

TEST(ConfigTest, PartialOverrideKeepsOtherDefaults) {
  const AppConfig cfg = parse_config(R"(
[control.pursuit]
kp = 3
[scenario.vor]
amplitude_deg = 5.5
[bus]
servo_ids = [10, 11, 12, 13]
)");
  EXPECT_EQ(cfg.sim.control.pursuit.kp, 3.0);
  EXPECT_EQ(cfg.sim.control.pursuit.ki, 2.0);
  EXPECT_EQ(cfg.vor.amplitude, 5.5);
  EXPECT_EQ(cfg.vor.frequency, 0.5);
  EXPECT_EQ(cfg.sim.servo_ids.right_v, 13);
  EXPECT_EQ(cfg.sim.control_rate, 100.0);
}

TEST(ConfigTest, EmptyTextIsAllDefaults) {
  const AppConfig cfg = parse_config("");
  EXPECT_EQ(cfg.sim.camera_rate, 30.0);
  EXPECT_EQ(cfg.noise_px, 1.0);
}

TEST(ConfigTest, UnknownKeysRejected) {
  EXPECT_NE(error_of("[camera]\nwidth = 10\n").find("camera.width"), std::string::npos);
  EXPECT_NE(error_of("[cameras]\n").find("cameras"), std::string::npos);
  EXPECT_NE(error_of("[scenario.walk]\n").find("scenario.walk"), std::string::npos);
  EXPECT_NE(error_of("[control.pursuit]\nkq = 1\n").find("control.pursuit.kq"), std::string::npos);
  EXPECT_NE(error_of("\n\nbogus = 1\n").find("line 3"), std::string::npos);
}

TEST(ConfigTest, WrongTypesRejected) {
  EXPECT_NE(error_of("[sim]\ncontrol_rate_hz = \"fast\"\n").find("sim.control_rate_hz"), std::string::npos);
  EXPECT_NE(error_of("[sim]\nseed = 1.5\n").find("integer"), std::string::npos);
  EXPECT_NE(error_of("[sim]\nseed = -1\n").find("range"), std::string::npos);
  EXPECT_NE(error_of("geometry = 3\n").find("table"), std::string::npos);
  EXPECT_NE(error_of("[bus]\nservo_ids = [1, 2]\n").find("bus.servo_ids"), std::string::npos);
  EXPECT_NE(error_of("[sim]\ncontrol_rate_hz = nan\n").find("finite"), std::string::npos);
}

TEST(ConfigTest, InvariantsChecked) {
  EXPECT_NE(error_of("[sim]\ncamera_rate_hz = 200\n").find("camera_rate"), std::string::npos);
  EXPECT_NE(error_of("[geometry]\nbobbin_radius_mm = 40\n"), "");
  EXPECT_NE(error_of("[scenario.vergence]\nz_end_m = 0\n").find("z_end"), std::string::npos);
  EXPECT_NE(error_of("[scenario.pursuit]\namplitude_deg = 45\n").find("amplitude"), std::string::npos);
  EXPECT_NE(error_of("[face]\nnoise_px = -1\n").find("noise_px"), std::string::npos);
  EXPECT_NE(error_of("[control]\nfixation_threshold = 0.5\n").find("fixation_threshold"), std::string::npos);
}

TEST(ConfigTest, SyntaxErrorReportsPosition) {
  const std::string msg = error_of("[sim\n");
  EXPECT_NE(msg.find("test.toml:1:"), std::string::npos) << msg;
}

TEST(ConfigTest, MissingFileIsConfigError) {
  EXPECT_THROW(load_config("/nonexistent/ocular.toml"), ConfigError);
}

TEST(ConfigTest, BuildScenario) {
  const AppConfig cfg = parse_config("[face]\nnoise_px = 0.25\n");
  for (auto name : kExperiments) {
    const auto s = build_scenario(cfg, name, 17, true);
    EXPECT_EQ(s.name, name);
    EXPECT_EQ(s.seed, 17u);
    EXPECT_EQ(s.noise_std, 0.25);
    EXPECT_TRUE(s.vor_disabled);
  }
  EXPECT_THROW(build_scenario(cfg, "bogus", 1), std::invalid_argument);
  EXPECT_TRUE(is_experiment("vor"));
  EXPECT_FALSE(is_experiment("VOR"));
}

}  // namespace
}  // namespace ocular::io
