#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace uavlab::flightdyn {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

/// ZYX (yaw-pitch-roll) Euler angles, radians.
struct EulerAngles {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

Quat quaternion_from_euler(const EulerAngles& e);
EulerAngles euler_from_quaternion(const Quat& q);

/// Full 6-DOF truth state in a flat-Earth NED frame. `attitude` rotates body
/// vectors into NED.
struct RigidBodyState {
  double time = 0.0;
  Vec3 position_ned = Vec3::Zero();
  Vec3 velocity_body = Vec3::Zero();
  Quat attitude = Quat::Identity();
  Vec3 angular_rates = Vec3::Zero();

  EulerAngles euler() const { return euler_from_quaternion(attitude); }
  double altitude() const { return -position_ned.z(); }
  double airspeed() const { return velocity_body.norm(); }
  Vec3 velocity_ned() const { return attitude * velocity_body; }
  bool is_finite() const;
};

/// Time derivative of a RigidBodyState, component by component.
struct StateDerivative {
  Vec3 position_ned = Vec3::Zero();
  Vec3 velocity_body = Vec3::Zero();
  Eigen::Vector4d attitude = Eigen::Vector4d::Zero();  // (w, x, y, z)
  Vec3 angular_rates = Vec3::Zero();
};

/// Force and moment about the centre of gravity, body axes.
struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 moment = Vec3::Zero();
};

}  // namespace uavlab::flightdyn
