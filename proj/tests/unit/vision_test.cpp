#include "ocular/vision.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace ocular {
namespace {

using V3 = Vector3<double>;
using V2 = Vector2<double>;

TEST(VisionTest, DefaultFocalLength) {
  CameraModel<double> cam;
  EXPECT_NEAR(cam.focal(), 554.256, 1e-3);
  cam.horizontal_fov = 180.0;
  EXPECT_THROW(cam.validate(), std::invalid_argument);
}

TEST(VisionTest, EyeCameraPose) {
  EyeGeometry<double> geom;
  const auto left = eye_camera_pose(geom, HeadPose<double>{}, Eye::Left, GazeState<double>::Zero());
  EXPECT_TRUE(left.translation().isApprox(V3(-0.035, 0, 0)));
  EXPECT_TRUE((left.linear() * V3::UnitZ()).isApprox(V3::UnitZ()));

  const auto right = eye_camera_pose(geom, HeadPose<double>{}, Eye::Right, GazeState<double>::Zero());
  EXPECT_DOUBLE_EQ(right.translation().x(), -left.translation().x());

  const HeadPose<double> head{deg2rad(10.0), 0.0};
  const auto cancel = eye_camera_pose(geom, head, Eye::Left, GazeState<double>(deg2rad(-10.0), 0));
  EXPECT_LT((cancel.linear() * V3::UnitZ() - V3::UnitZ()).norm(), 1e-12);
}

TEST(VisionTest, PositivePanLooksLeftPositiveTiltLooksUp) {
  EyeGeometry<double> geom;
  const auto pan = eye_camera_pose(geom, HeadPose<double>{}, Eye::Left, GazeState<double>(0.2, 0));
  EXPECT_LT((pan.linear() * V3::UnitZ()).x(), 0.0);
  const auto tilt = eye_camera_pose(geom, HeadPose<double>{}, Eye::Left, GazeState<double>(0, 0.2));
  EXPECT_GT((tilt.linear() * V3::UnitZ()).y(), 0.0);
}

TEST(VisionTest, Project) {
  CameraModel<double> cam;
  const Pose<double> identity = Pose<double>::Identity();
  EXPECT_EQ(*project(cam, identity, V3(0, 0, 1)), V2(320, 240));

  const double a = deg2rad(10.0);
  const auto uv = project(cam, identity, V3(std::sin(a), 0, std::cos(a)));
  ASSERT_TRUE(uv);
  EXPECT_NEAR(uv->x(), 417.73, 5e-3);
  EXPECT_NEAR(uv->x(), 320 + cam.focal() * std::tan(a), 1e-9);

  EXPECT_FALSE(project(cam, identity, V3(0, 0, -1)));
  EXPECT_FALSE(project(cam, identity, V3(0.1, 0, 0)));
}

TEST(VisionTest, BackProjectionRoundTrip) {
  CameraModel<double> cam;
  EyeGeometry<double> geom;
  SplitMix64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const HeadPose<double> head{0.3 * (2 * rng.uniform() - 1), 0.2 * (2 * rng.uniform() - 1)};
    const GazeState<double> gaze(0.4 * (2 * rng.uniform() - 1), 0.4 * (2 * rng.uniform() - 1));
    const auto pose = eye_camera_pose(geom, head, Eye::Right, gaze);
    const V2 uv(cam.width * rng.uniform() * 0.999, cam.height * rng.uniform() * 0.999);
    const double depth = 0.2 + 5.0 * rng.uniform();
    const V3 point = pose.translation() + depth * back_project(cam, pose, uv);
    const auto again = project(cam, pose, point);
    ASSERT_TRUE(again);
    ASSERT_LE((*again - uv).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(VisionTest, ObserveFaceBaselineOffset) {
  CameraModel<double> cam;
  EyeGeometry<double> geom;
  SplitMix64 rng(1);
  FaceTarget<double> face{V3(0, 0, 1), 0.16};
  const auto obs = observe_face(face, HeadPose<double>{}, geom, {GazeState<double>::Zero(), GazeState<double>::Zero()},
                                cam, 0.0, rng, 0.5);
  ASSERT_TRUE(obs[0].valid && obs[1].valid);
  EXPECT_NEAR(obs[0].center.x(), 339.40, 5e-3);
  EXPECT_NEAR(obs[1].center.x(), 300.60, 5e-3);
  EXPECT_DOUBLE_EQ(obs[0].center.y(), 240.0);
  EXPECT_DOUBLE_EQ(obs[1].center.y(), 240.0);
  EXPECT_NEAR(obs[0].bbox[2], cam.focal() * 0.16, 1e-9);
  EXPECT_EQ(obs[0].camera, Eye::Left);
  EXPECT_DOUBLE_EQ(obs[1].timestamp, 0.5);
}

TEST(VisionTest, ObserveFaceBehindOrOffFrameIsInvalid) {
  CameraModel<double> cam;
  EyeGeometry<double> geom;
  SplitMix64 rng(1);
  const std::array<GazeState<double>, 2> zero{GazeState<double>::Zero(), GazeState<double>::Zero()};
  auto behind = observe_face(FaceTarget<double>{V3(0, 0, -1)}, HeadPose<double>{}, geom, zero, cam, 0.0, rng);
  EXPECT_FALSE(behind[0].valid);
  EXPECT_FALSE(behind[1].valid);
  auto aside = observe_face(FaceTarget<double>{V3(3, 0, 1)}, HeadPose<double>{}, geom, zero, cam, 0.0, rng);
  EXPECT_FALSE(aside[0].valid);
}

TEST(VisionTest, NoiseFreeObservationIsDeterministic) {
  CameraModel<double> cam;
  EyeGeometry<double> geom;
  SplitMix64 a(1), b(99);
  const std::array<GazeState<double>, 2> gaze{GazeState<double>(0.1, -0.05), GazeState<double>(0.12, -0.05)};
  FaceTarget<double> face{V3(0.2, 0.1, 1.5)};
  const auto first = observe_face(face, HeadPose<double>{0.05, 0.0}, geom, gaze, cam, 0.0, a);
  const auto second = observe_face(face, HeadPose<double>{0.05, 0.0}, geom, gaze, cam, 0.0, b);
  EXPECT_EQ(first[0].center, second[0].center);
  EXPECT_EQ(first[1].center, second[1].center);
}

TEST(VisionTest, NoisyObservationIsSeeded) {
  CameraModel<double> cam;
  EyeGeometry<double> geom;
  SplitMix64 a(4), b(4);
  const std::array<GazeState<double>, 2> zero{GazeState<double>::Zero(), GazeState<double>::Zero()};
  FaceTarget<double> face{V3(0, 0, 1.5)};
  const auto first = observe_face(face, HeadPose<double>{}, geom, zero, cam, 1.0, a);
  const auto second = observe_face(face, HeadPose<double>{}, geom, zero, cam, 1.0, b);
  EXPECT_EQ(first[0].center, second[0].center);
  EXPECT_NE(first[0].center.x(), 320 + cam.focal() * 0.035 / 1.5);
}

TEST(VisionTest, MidlineDisparityShrinksWithDistance) {
  CameraModel<double> cam;
  EyeGeometry<double> geom;
  SplitMix64 rng(1);
  const std::array<GazeState<double>, 2> zero{GazeState<double>::Zero(), GazeState<double>::Zero()};
  double prev = std::numeric_limits<double>::infinity();
  for (double z = 0.3; z < 10.0; z *= 1.3) {
    const auto obs = observe_face(FaceTarget<double>{V3(0, 0, z)}, HeadPose<double>{}, geom, zero, cam, 0.0, rng);
    const double disparity = obs[0].center.x() - obs[1].center.x();
    EXPECT_NEAR(disparity, cam.focal() * 0.070 / z, 1e-9);
    EXPECT_GT(disparity, 0.0);
    EXPECT_LT(disparity, prev);
    prev = disparity;
  }
}

TEST(VisionTest, NormalizedError) {
  CameraModel<double> cam;
  FaceObservation<double> obs;
  obs.valid = true;
  obs.center = V2(320, 240);
  EXPECT_EQ(*normalized_error(obs, cam), V2(0, 0));
  obs.center = V2(640, 480);
  EXPECT_EQ(*normalized_error(obs, cam), V2(1, 1));
  obs.center = V2(480, 240);
  EXPECT_EQ(*normalized_error(obs, cam), V2(0.5, 0));
  obs.valid = false;
  EXPECT_FALSE(normalized_error(obs, cam));
}

TEST(VisionTest, NormalizedErrorIsOdd) {
  CameraModel<double> cam;
  SplitMix64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const V2 d(300 * (2 * rng.uniform() - 1), 200 * (2 * rng.uniform() - 1));
    FaceObservation<double> plus, minus;
    plus.valid = minus.valid = true;
    plus.center = cam.principal_point() + d;
    minus.center = cam.principal_point() - d;
    EXPECT_TRUE(normalized_error(plus, cam)->isApprox(-*normalized_error(minus, cam)));
  }
}

}  // namespace
}  // namespace ocular
