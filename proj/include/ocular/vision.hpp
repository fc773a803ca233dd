#pragma once

// Pinhole camera per eye and synthetic face observations.
//
// Body frame: x right, y up, z forward; eyes sit at x = -/+ interocular/2.
// Camera frame uses the same axes, so image u grows with camera x and image v
// grows downward.

#include "ocular/plant.hpp"
#include "ocular/rng.hpp"

#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <type_traits>

namespace ocular {

enum class Eye { Left = 0, Right = 1 };

inline constexpr std::array<Eye, 2> kEyes = {Eye::Left, Eye::Right};

inline constexpr const char* eye_name(Eye eye) { return eye == Eye::Left ? "L" : "R"; }

template <typename Scalar = double>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar = double>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar = double>
using Pose = Eigen::Transform<Scalar, 3, Eigen::Isometry>;

template <typename Scalar = double>
struct CameraModel {
  Scalar width = Scalar(640);
  Scalar height = Scalar(480);
  Scalar horizontal_fov = Scalar(60); // deg

  void validate() const {
    if (!(width > 0 && height > 0)) throw std::invalid_argument("camera: image size must be positive");
    if (!(horizontal_fov > 0 && horizontal_fov < 180))
      throw std::invalid_argument("camera: horizontal_fov must lie in (0, 180) deg");
  }

  Scalar focal() const {
    using std::tan;
    return (width / 2) / tan(deg2rad(horizontal_fov) / 2);
  }

  Vector2<Scalar> principal_point() const { return {width / 2, height / 2}; }

  bool contains(const Vector2<Scalar>& uv) const {
    return uv.x() >= 0 && uv.x() < width && uv.y() >= 0 && uv.y() < height;
  }
};

/// Robot body orientation in the world, radians. Same sign convention as gaze.
template <typename Scalar = double>
struct HeadPose {
  Scalar yaw = Scalar(0);
  Scalar pitch = Scalar(0);
};

template <typename Scalar = double>
struct FaceTarget {
  Vector3<Scalar> position = Vector3<Scalar>(0, 0, 1); // m, world frame
  Scalar face_width = Scalar(0.16);                    // m
};

/// Rotation for a leftward yaw followed by an upward pitch.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> yaw_pitch_rotation(Scalar yaw, Scalar pitch) {
  using AngleAxis = Eigen::AngleAxis<Scalar>;
  return (AngleAxis(-yaw, Vector3<Scalar>::UnitY()) * AngleAxis(-pitch, Vector3<Scalar>::UnitX()))
      .toRotationMatrix();
}

template <typename Scalar>
Pose<Scalar> eye_camera_pose(const EyeGeometry<Scalar>& geom, const HeadPose<std::type_identity_t<Scalar>>& head,
                             Eye eye, const GazeState<std::type_identity_t<Scalar>>& gaze) {
  const Scalar half_baseline = geom.interocular_distance / Scalar(2000);
  const Vector3<Scalar> offset(eye == Eye::Left ? -half_baseline : half_baseline, 0, 0);
  const auto head_rotation = yaw_pitch_rotation(head.yaw, head.pitch);

  Pose<Scalar> pose = Pose<Scalar>::Identity();
  pose.linear() = head_rotation * yaw_pitch_rotation(gaze[kPan], gaze[kTilt]);
  pose.translation() = head_rotation * offset;
  return pose;
}

/// Pixel coordinates, or nullopt when the point is at or behind the image plane.
template <typename Scalar>
std::optional<Vector2<Scalar>> project(const CameraModel<Scalar>& cam, const Pose<Scalar>& pose,
                                       const Vector3<Scalar>& point) {
  const Vector3<Scalar> p = pose.inverse() * point;
  if (p.z() <= 0) return std::nullopt;
  const Scalar f = cam.focal();
  return Vector2<Scalar>(cam.width / 2 + f * p.x() / p.z(), cam.height / 2 - f * p.y() / p.z());
}

/// Unit ray direction (world frame) through pixel uv.
template <typename Scalar>
Vector3<Scalar> back_project(const CameraModel<Scalar>& cam, const Pose<Scalar>& pose,
                             const Vector2<Scalar>& uv) {
  const Scalar f = cam.focal();
  const Vector3<Scalar> dir((uv.x() - cam.width / 2) / f, (cam.height / 2 - uv.y()) / f, 1);
  return pose.linear() * dir.normalized();
}

template <typename Scalar = double>
struct FaceObservation {
  Eye camera = Eye::Left;
  Vector2<Scalar> center = Vector2<Scalar>::Zero();          // px
  Eigen::Matrix<Scalar, 4, 1> bbox = Eigen::Matrix<Scalar, 4, 1>::Zero(); // u0, v0, w, h px
  Scalar timestamp = Scalar(0);
  bool valid = false;
};

template <typename Scalar>
FaceObservation<Scalar> observe_face_one(const FaceTarget<Scalar>& target, const HeadPose<Scalar>& head,
                                         const EyeGeometry<Scalar>& geom, Eye eye,
                                         const GazeState<Scalar>& gaze, const CameraModel<Scalar>& cam,
                                         Scalar noise_std, SplitMix64& rng, Scalar timestamp = Scalar(0)) {
  FaceObservation<Scalar> obs;
  obs.camera = eye;
  obs.timestamp = timestamp;

  const Pose<Scalar> pose = eye_camera_pose(geom, head, eye, gaze);
  const auto uv = project(cam, pose, target.position);
  if (!uv) return obs;

  Vector2<Scalar> center = *uv;
  if (noise_std > 0) {
    center.x() += noise_std * Scalar(rng.normal());
    center.y() += noise_std * Scalar(rng.normal());
  }
  const Scalar depth = (pose.inverse() * target.position).z();
  const Scalar size = cam.focal() * target.face_width / depth;

  obs.center = center;
  obs.bbox << center.x() - size / 2, center.y() - size / 2, size, size;
  obs.valid = cam.contains(center);
  return obs;
}

/// One observation per eye, left first. Noise draws are taken in that order.
template <typename Scalar>
std::array<FaceObservation<Scalar>, 2> observe_face(const FaceTarget<Scalar>& target,
                                                    const HeadPose<Scalar>& head,
                                                    const EyeGeometry<Scalar>& geom,
                                                    const std::array<GazeState<Scalar>, 2>& gaze,
                                                    const CameraModel<Scalar>& cam, Scalar noise_std,
                                                    SplitMix64& rng, Scalar timestamp = Scalar(0)) {
  return {observe_face_one(target, head, geom, Eye::Left, gaze[0], cam, noise_std, rng, timestamp),
          observe_face_one(target, head, geom, Eye::Right, gaze[1], cam, noise_std, rng, timestamp)};
}

/// Image-centre error in [-1, 1] per axis; nullopt for a lost face.
template <typename Scalar>
std::optional<Vector2<Scalar>> normalized_error(const FaceObservation<Scalar>& obs,
                                                const CameraModel<Scalar>& cam) {
  if (!obs.valid) return std::nullopt;
  return Vector2<Scalar>((obs.center.x() - cam.width / 2) / (cam.width / 2),
                         (obs.center.y() - cam.height / 2) / (cam.height / 2));
}

/// Port for anything that produces face observations (simulated detector, replay, ...).
class FaceSource {
 public:
  virtual ~FaceSource() = default;
  virtual FaceObservation<double> next_observation(Eye eye, double time) = 0;
};

}  // namespace ocular
