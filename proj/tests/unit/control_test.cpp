#include "ocular/control.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace ocular {
namespace {

using V2 = Vector2<double>;

TEST(PidTest, PureProportional) {
  PidGains<double> gains{1.0, 0.0, 0.0, 1.0, 10.0};
  auto [u, state] = pid_step(gains, PidState<double>{}, 0.5, 0.1);
  EXPECT_DOUBLE_EQ(u, 0.5);
  EXPECT_TRUE(state.initialized);
}

TEST(PidTest, ProportionalPlusIntegralFirstStep) {
  PidGains<double> gains{1.0, 2.0, 0.0, 1.0, 10.0};
  auto [u, state] = pid_step(gains, PidState<double>{}, 0.5, 0.1);
  EXPECT_NEAR(state.integral, 0.05, 1e-15);
  EXPECT_NEAR(u, 0.6, 1e-15);
}

TEST(PidTest, DerivativeSuppressedOnFirstSample) {
  PidGains<double> gains{0.0, 0.0, 0.2, 1.0, 10.0};
  auto [u0, s0] = pid_step(gains, PidState<double>{}, 0.0, 0.1);
  EXPECT_DOUBLE_EQ(u0, 0.0);
  auto [u1, s1] = pid_step(gains, s0, 0.5, 0.1);
  EXPECT_NEAR(u1, 1.0, 1e-12);
  auto [first, _] = pid_step(gains, PidState<double>{}, 0.5, 0.1);
  EXPECT_DOUBLE_EQ(first, 0.0);
}

TEST(PidTest, RejectsNonPositiveDt) {
  EXPECT_THROW(pid_step(PidGains<double>{}, PidState<double>{}, 0.1, 0.0), std::invalid_argument);
}

TEST(PidTest, OutputBoundedAndAntiWindup) {
  PidGains<double> gains{3.0, 5.0, 0.4, 0.7, 2.0};
  SplitMix64 rng(21);
  PidState<double> state;
  for (int i = 0; i < 5000; ++i) {
    const double e = i < 2500 ? 1.0 : 2 * rng.uniform() - 1;
    auto [u, next] = pid_step(gains, state, e, 0.01);
    ASSERT_LE(std::abs(u), gains.output_limit);
    ASSERT_LE(std::abs(gains.ki * next.integral), gains.integral_limit + 1e-12);
    state = next;
  }
}

TEST(SupervisorTest, ClassifyMode) {
  SupervisorConfig<double> cfg;
  EXPECT_EQ(classify_mode(V2(0.5, 0), V2::Zero(), cfg).base, BaseMode::Saccade);
  EXPECT_EQ(classify_mode(V2(0, -0.5), V2::Zero(), cfg).base, BaseMode::Saccade);
  EXPECT_EQ(classify_mode(V2(0.1, 0), V2::Zero(), cfg).base, BaseMode::SmoothPursuit);
  const auto mode = classify_mode(V2(0.01, 0), V2(0.5, 0), cfg);
  EXPECT_EQ(mode.base, BaseMode::Fixation);
  EXPECT_TRUE(mode.vor_active);
  EXPECT_FALSE(classify_mode(V2(0.01, 0), V2(0.04, 0), cfg).vor_active);
}

TEST(SupervisorTest, ConfigInvariants) {
  SupervisorConfig<double> cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.fixation_threshold = 0.4;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(GazeCommandTest, PerfectVorCompensation) {
  SupervisorConfig<double> cfg;
  const V2 head(deg2rad(20.0), 0.0);
  for (int eye = 0; eye < 2; ++eye) {
    auto cmd = gaze_command(cfg, EyeControlState<double>{}, std::optional<V2>(V2::Zero()), head, 0.01);
    EXPECT_NEAR(cmd.rate[kPan], deg2rad(-20.0), 1e-15);
    EXPECT_DOUBLE_EQ(cmd.rate[kTilt], 0.0);
    EXPECT_TRUE(cmd.state.mode.vor_active);
  }
}

TEST(GazeCommandTest, CentredAndStillGivesZero) {
  SupervisorConfig<double> cfg;
  auto cmd = gaze_command(cfg, EyeControlState<double>{}, std::optional<V2>(V2::Zero()), V2::Zero(), 0.01);
  EXPECT_EQ(cmd.rate, V2::Zero());
  EXPECT_FALSE(std::signbit(cmd.rate[0]));
  EXPECT_EQ(cmd.state.mode.base, BaseMode::Fixation);
}

TEST(GazeCommandTest, SaccadeRateCapIsExact) {
  SupervisorConfig<double> cfg;
  cfg.saccade.kp = 100.0;
  cfg.saccade.output_limit = 6.0;
  auto cmd = gaze_command(cfg, EyeControlState<double>{}, std::optional<V2>(V2(0.95, 0)), V2::Zero(), 0.01);
  EXPECT_EQ(cmd.state.mode.base, BaseMode::Saccade);
  EXPECT_DOUBLE_EQ(std::abs(cmd.rate[kPan]), 6.0);

  cfg.saccade_rate = 2.5;
  cmd = gaze_command(cfg, EyeControlState<double>{}, std::optional<V2>(V2(0.95, 0)), V2::Zero(), 0.01);
  EXPECT_DOUBLE_EQ(std::abs(cmd.rate[kPan]), 2.5);
}

TEST(GazeCommandTest, ErrorSignConvention) {
  SupervisorConfig<double> cfg;
  // Face right of and below centre: pan right (negative) and tilt down (negative).
  auto cmd = gaze_command(cfg, EyeControlState<double>{}, std::optional<V2>(V2(0.1, 0.1)), V2::Zero(), 0.01);
  EXPECT_LT(cmd.rate[kPan], 0.0);
  EXPECT_LT(cmd.rate[kTilt], 0.0);
}

TEST(GazeCommandTest, LostFaceFreezesIntegralKeepsVor) {
  SupervisorConfig<double> cfg;
  EyeControlState<double> state;
  for (int i = 0; i < 20; ++i)
    state = gaze_command(cfg, state, std::optional<V2>(V2(0.1, 0.05)), V2::Zero(), 0.01).state;
  const auto frozen = state.pursuit;

  const V2 head(0.3, -0.1);
  auto cmd = gaze_command(cfg, state, std::nullopt, head, 0.01);
  EXPECT_TRUE(cmd.rate.isApprox(-cfg.vor_gain * head));
  EXPECT_EQ(cmd.state.pursuit[0].integral, frozen[0].integral);
  EXPECT_EQ(cmd.state.pursuit[1].integral, frozen[1].integral);
  EXPECT_EQ(cmd.state.mode.base, state.mode.base);

  auto disabled = gaze_command(cfg, state, std::nullopt, head, 0.01, false);
  EXPECT_EQ(disabled.rate, V2::Zero());
}

TEST(GazeCommandTest, VorSuperpositionWithZeroError) {
  SupervisorConfig<double> cfg;
  cfg.vor_gain = 0.8;
  SplitMix64 rng(2);
  EyeControlState<double> state;
  for (int i = 0; i < 200; ++i) {
    const V2 head(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
    auto cmd = gaze_command(cfg, state, std::optional<V2>(V2::Zero()), head, 0.01);
    if (cmd.state.mode.vor_active) {
      ASSERT_EQ(cmd.rate, V2(-cfg.vor_gain * head));
    }
    state = cmd.state;
  }
}

TEST(GazeCommandTest, ModeChangeRestartsEnteredGainSet) {
  SupervisorConfig<double> cfg;
  EyeControlState<double> state;
  for (int i = 0; i < 10; ++i)
    state = gaze_command(cfg, state, std::optional<V2>(V2(0.2, 0)), V2::Zero(), 0.01).state;
  ASSERT_NE(state.pursuit[0].integral, 0.0);
  state = gaze_command(cfg, state, std::optional<V2>(V2(0.8, 0)), V2::Zero(), 0.01).state;
  EXPECT_EQ(state.mode.base, BaseMode::Saccade);
  state = gaze_command(cfg, state, std::optional<V2>(V2(0.2, 0)), V2::Zero(), 0.01).state;
  EXPECT_NEAR(state.pursuit[0].integral, 0.2 * 0.01, 1e-15);
}

TEST(VergenceReferenceTest, Values) {
  EyeGeometry<double> geom;
  auto [l_inf, r_inf] = vergence_reference(geom, std::numeric_limits<double>::infinity());
  EXPECT_DOUBLE_EQ(l_inf, 0.0);
  EXPECT_DOUBLE_EQ(r_inf, 0.0);

  auto [l5, r5] = vergence_reference(geom, 0.5);
  EXPECT_NEAR(rad2deg(r5), 4.004, 5e-4);
  EXPECT_DOUBLE_EQ(l5, -r5);

  auto [l3, r3] = vergence_reference(geom, 0.3);
  EXPECT_NEAR(rad2deg(r3), 6.654, 5e-4);
  EXPECT_LT(l3, 0.0);

  EXPECT_THROW(vergence_reference(geom, 0.0), std::invalid_argument);
}

TEST(ClosedLoopTest, ProportionalOnlyConvergesToCentre) {
  // Pure-integrator plant, noise free, static target.
  EyeGeometry<double> geom;
  CameraModel<double> cam;
  SupervisorConfig<double> cfg;
  cfg.pursuit = {2.0, 0.0, 0.0, 1.0, 3.0};
  cfg.saccade = {2.0, 0.0, 0.0, 1.0, 3.0};
  SplitMix64 rng(1);
  const FaceTarget<double> face{Vector3<double>(0.4, -0.2, 1.5)};
  std::array<GazeState<double>, 2> gaze{GazeState<double>::Zero(), GazeState<double>::Zero()};
  std::array<EyeControlState<double>, 2> state{};
  const double dt = 0.01;
  std::array<V2, 2> last{};
  for (int k = 0; k < 1000; ++k) {
    const auto obs = observe_face(face, HeadPose<double>{}, geom, gaze, cam, 0.0, rng);
    for (int e = 0; e < 2; ++e) {
      const auto err = normalized_error(obs[e], cam);
      ASSERT_TRUE(err);
      last[e] = *err;
      auto cmd = gaze_command(cfg, state[e], err, V2::Zero(), dt);
      state[e] = cmd.state;
      gaze[e] += cmd.rate * dt;
    }
  }
  EXPECT_LT(last[0].cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_LT(last[1].cwiseAbs().maxCoeff(), 1e-3);
}

}  // namespace
}  // namespace ocular
